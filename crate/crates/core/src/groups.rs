//! Finite groups given by multiplication tables, 2-cocycles, and regular
//! representations.

use std::fmt;
use std::path::Path;

use crate::error::{invalid, Error, Result};
use crate::tensor::{c64, zeros, CMatrix, C64, ONE};

/// A finite group on the indices `0..n` with identity `0`.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    name: String,
    table: Vec<Vec<usize>>,
    inverses: Vec<usize>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup({}, order {})", self.name, self.order())
    }
}

impl FiniteGroup {
    /// Validates a raw multiplication table: `table[s][t]` is the index of `st`.
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Self> {
        Self::named("custom", table)
    }

    pub fn named(name: &str, table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(invalid("group table is empty"));
        }
        for (s, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(invalid(format!("row {s} has {} entries, expected {n}", row.len())));
            }
            if let Some(&bad) = row.iter().find(|&&x| x >= n) {
                return Err(invalid(format!("row {s} contains out-of-range index {bad}")));
            }
        }
        for s in 0..n {
            if table[0][s] != s || table[s][0] != s {
                return Err(invalid(format!("index 0 is not an identity for element {s}")));
            }
        }
        for s in 0..n {
            let mut row_seen = vec![false; n];
            let mut col_seen = vec![false; n];
            for t in 0..n {
                if std::mem::replace(&mut row_seen[table[s][t]], true) {
                    return Err(invalid(format!("not a Latin square: row {s} repeats {}", table[s][t])));
                }
                if std::mem::replace(&mut col_seen[table[t][s]], true) {
                    return Err(invalid(format!(
                        "not a Latin square: column {s} repeats {}",
                        table[t][s]
                    )));
                }
            }
        }
        for s in 0..n {
            for t in 0..n {
                for r in 0..n {
                    if table[table[s][t]][r] != table[s][table[t][r]] {
                        return Err(invalid(format!("not associative at ({s}, {t}, {r})")));
                    }
                }
            }
        }
        let inverses = (0..n)
            .map(|s| (0..n).find(|&t| table[s][t] == 0).expect("Latin square row hits 0"))
            .collect();
        Ok(Self {
            name: name.to_string(),
            table,
            inverses,
        })
    }

    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(invalid("cyclic group order must be positive"));
        }
        let table = (0..n).map(|s| (0..n).map(|t| (s + t) % n).collect()).collect();
        Self::named(&format!("Z{n}"), table)
    }

    /// `G × H` with `(g, h)` stored at index `g·|H| + h`.
    pub fn direct_product(g: &Self, h: &Self) -> Self {
        let (m, k) = (g.order(), h.order());
        let table = (0..m * k)
            .map(|x| {
                (0..m * k)
                    .map(|y| g.mul(x / k, y / k) * k + h.mul(x % k, y % k))
                    .collect()
            })
            .collect();
        Self::named(&format!("{}x{}", g.name, h.name), table).expect("product of groups is a group")
    }

    /// Closure of a set of permutations under composition, identity first.
    /// `(p·q)(i) = p(q(i))`.
    pub fn from_permutations(name: &str, generators: &[Vec<usize>]) -> Result<Self> {
        let degree = generators
            .first()
            .map(|g| g.len())
            .ok_or_else(|| invalid("no generators"))?;
        let id: Vec<usize> = (0..degree).collect();
        let mut elems = vec![id];
        let mut i = 0;
        while i < elems.len() {
            for g in generators {
                if g.len() != degree {
                    return Err(invalid("generators have different degrees"));
                }
                let prod: Vec<usize> = elems[i].iter().map(|&x| g[x]).collect();
                if !elems.contains(&prod) {
                    elems.push(prod);
                }
            }
            i += 1;
        }
        let index = |p: &Vec<usize>| elems.iter().position(|q| q == p).expect("closed");
        let table = elems
            .iter()
            .map(|p| {
                elems
                    .iter()
                    .map(|q| index(&q.iter().map(|&x| p[x]).collect()))
                    .collect()
            })
            .collect();
        Self::named(name, table)
    }

    pub fn symmetric3() -> Self {
        Self::from_permutations("S3", &[vec![1, 0, 2], vec![1, 2, 0]]).expect("S3")
    }

    /// Symmetries of the square.
    pub fn dihedral4() -> Self {
        Self::from_permutations("D4", &[vec![1, 2, 3, 0], vec![0, 3, 2, 1]]).expect("D4")
    }

    /// Quaternion group, via the regular action of its units on themselves.
    pub fn quaternion() -> Self {
        // units ±1, ±i, ±j, ±k encoded as (sign, axis) with axis 0 = real
        const AXES: [[(i8, usize); 4]; 4] = [
            [(1, 0), (1, 1), (1, 2), (1, 3)],
            [(1, 1), (-1, 0), (1, 3), (-1, 2)],
            [(1, 2), (-1, 3), (-1, 0), (1, 1)],
            [(1, 3), (1, 2), (-1, 1), (-1, 0)],
        ];
        let encode = |sign: i8, axis: usize| if sign > 0 { axis } else { axis + 4 };
        let decode = |x: usize| if x < 4 { (1i8, x) } else { (-1i8, x - 4) };
        let table = (0..8)
            .map(|x| {
                (0..8)
                    .map(|y| {
                        let ((sx, ax), (sy, ay)) = (decode(x), decode(y));
                        let (s, a) = AXES[ax][ay];
                        encode(sx * sy * s, a)
                    })
                    .collect()
            })
            .collect();
        Self::named("Q8", table).expect("Q8")
    }

    pub fn trivial() -> Self {
        Self::cyclic(1).expect("order 1")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn mul(&self, s: usize, t: usize) -> usize {
        self.table[s][t]
    }

    pub fn inv(&self, s: usize) -> usize {
        self.inverses[s]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|s| (0..n).all(|t| self.mul(s, t) == self.mul(t, s)))
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order()
    }

    fn check_index(&self, s: usize) -> Result<()> {
        if s >= self.order() {
            return Err(invalid(format!(
                "element {s} out of range for group of order {}",
                self.order()
            )));
        }
        Ok(())
    }

    /// Left regular representation `λ(s)δ_t = δ_{st}`.
    pub fn regular_rep(&self, s: usize) -> Result<CMatrix> {
        self.check_index(s)?;
        let n = self.order();
        let mut m = zeros(n, n);
        for t in 0..n {
            m[(self.mul(s, t), t)] = ONE;
        }
        Ok(m)
    }

    /// Right regular representation `ρ(s)δ_t = δ_{ts⁻¹}`.
    pub fn right_regular_rep(&self, s: usize) -> Result<CMatrix> {
        self.check_index(s)?;
        let n = self.order();
        let si = self.inv(s);
        let mut m = zeros(n, n);
        for t in 0..n {
            m[(self.mul(t, si), t)] = ONE;
        }
        Ok(m)
    }

    pub fn lambda(&self, s: usize) -> CMatrix {
        self.regular_rep(s).expect("valid element")
    }

    pub fn rho(&self, s: usize) -> CMatrix {
        self.right_regular_rep(s).expect("valid element")
    }

    /// Parses the text format: order on the first line, then the table rows.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (ln, first) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "missing group order".into(),
        })?;
        let n: usize = first.trim().parse().map_err(|_| Error::Parse {
            line: ln + 1,
            msg: format!("expected group order, found {:?}", first.trim()),
        })?;
        if n == 0 {
            return Err(Error::Parse {
                line: ln + 1,
                msg: "group order must be positive".into(),
            });
        }
        let mut table = Vec::with_capacity(n);
        for row in 0..n {
            let (ln, line) = lines.next().ok_or(Error::Parse {
                line: ln + 2 + row,
                msg: format!("expected {n} table rows, found {row}"),
            })?;
            let entries = line
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<usize>().map_err(|_| Error::Parse {
                        line: ln + 1,
                        msg: format!("bad index {tok:?}"),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            if entries.len() != n {
                return Err(Error::Parse {
                    line: ln + 1,
                    msg: format!("expected {n} entries, found {}", entries.len()),
                });
            }
            table.push(entries);
        }
        if let Some((ln, _)) = lines.next() {
            return Err(Error::Parse {
                line: ln + 1,
                msg: "trailing content after group table".into(),
            });
        }
        Self::from_table(table)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| invalid(format!("cannot read {}: {e}", path.display())))?;
        Ok(Self::parse(&text)?.with_name(&path.display().to_string()))
    }
}

/// A normalized unimodular 2-cocycle `u: G × G → T`.
#[derive(Clone, Debug)]
pub struct Cocycle {
    group: FiniteGroup,
    values: Vec<Vec<C64>>,
}

const COCYCLE_TOL: f64 = 1e-9;

impl Cocycle {
    pub fn new(group: FiniteGroup, values: Vec<Vec<C64>>) -> Result<Self> {
        let n = group.order();
        if values.len() != n || values.iter().any(|r| r.len() != n) {
            return Err(invalid(format!("cocycle table must be {n}x{n}")));
        }
        for (s, row) in values.iter().enumerate() {
            for (t, u) in row.iter().enumerate() {
                if (u.norm() - 1.0).abs() > COCYCLE_TOL {
                    return Err(invalid(format!("|u({s},{t})| = {} is not 1", u.norm())));
                }
            }
        }
        for t in 0..n {
            if (values[0][t] - ONE).norm() > COCYCLE_TOL || (values[t][0] - ONE).norm() > COCYCLE_TOL {
                return Err(invalid(format!("cocycle not normalized at element {t}")));
            }
        }
        for s in 0..n {
            for t in 0..n {
                for r in 0..n {
                    let lhs = values[s][t] * values[group.mul(s, t)][r];
                    let rhs = values[t][r] * values[s][group.mul(t, r)];
                    if (lhs - rhs).norm() > COCYCLE_TOL {
                        return Err(invalid(format!("cocycle identity fails at ({s}, {t}, {r})")));
                    }
                }
            }
        }
        Ok(Self { group, values })
    }

    pub fn trivial(group: FiniteGroup) -> Self {
        let n = group.order();
        Self {
            group,
            values: vec![vec![ONE; n]; n],
        }
    }

    /// `u((a,b),(c,d)) = (−1)^{bc}` on `Z₂ × Z₂`, element `(a,b)` at index `2a+b`.
    pub fn pauli() -> Self {
        let z2 = FiniteGroup::cyclic(2).expect("Z2");
        let group = FiniteGroup::direct_product(&z2, &z2);
        let values = (0..4)
            .map(|x| {
                (0..4)
                    .map(|y| {
                        let b = x % 2;
                        let c = y / 2;
                        if b * c == 1 {
                            c64(-1.0, 0.0)
                        } else {
                            ONE
                        }
                    })
                    .collect()
            })
            .collect();
        Self::new(group, values).expect("pauli cocycle is valid")
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn value(&self, s: usize, t: usize) -> C64 {
        self.values[s][t]
    }

    pub fn is_trivial(&self, tol: f64) -> bool {
        self.values.iter().flatten().all(|u| (u - ONE).norm() <= tol)
    }

    /// Twisted regular representation `λ_u(s)δ_t = u(s,t)δ_{st}`.
    pub fn twisted_regular_rep(&self, s: usize) -> CMatrix {
        let g = &self.group;
        let n = g.order();
        let mut m = zeros(n, n);
        for t in 0..n {
            m[(g.mul(s, t), t)] = self.values[s][t];
        }
        m
    }

    /// Parses `n` lines of `n` tokens `re,im`.
    pub fn parse(group: FiniteGroup, text: &str) -> Result<Self> {
        let n = group.order();
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let mut values = Vec::with_capacity(n);
        for row in 0..n {
            let (ln, line) = lines.next().ok_or(Error::Parse {
                line: row + 1,
                msg: format!("expected {n} cocycle rows, found {row}"),
            })?;
            let entries = line
                .split_whitespace()
                .map(|tok| parse_complex(tok).ok_or(Error::Parse {
                    line: ln + 1,
                    msg: format!("bad complex value {tok:?}, expected re,im"),
                }))
                .collect::<Result<Vec<_>>>()?;
            if entries.len() != n {
                return Err(Error::Parse {
                    line: ln + 1,
                    msg: format!("expected {n} entries, found {}", entries.len()),
                });
            }
            values.push(entries);
        }
        if let Some((ln, _)) = lines.next() {
            return Err(Error::Parse {
                line: ln + 1,
                msg: "trailing content after cocycle table".into(),
            });
        }
        Self::new(group, values)
    }

    pub fn from_file(group: FiniteGroup, path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| invalid(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(group, &text)
    }
}

fn parse_complex(tok: &str) -> Option<C64> {
    let (re, im) = tok.split_once(',')?;
    Some(c64(re.parse().ok()?, im.parse().ok()?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::{identity, real_matrix, residual};

    fn builtins() -> Vec<FiniteGroup> {
        let z2 = FiniteGroup::cyclic(2).unwrap();
        vec![
            FiniteGroup::trivial(),
            z2.clone(),
            FiniteGroup::cyclic(3).unwrap(),
            FiniteGroup::cyclic(4).unwrap(),
            FiniteGroup::direct_product(&z2, &z2),
            FiniteGroup::symmetric3(),
            FiniteGroup::cyclic(8).unwrap(),
            FiniteGroup::dihedral4(),
            FiniteGroup::quaternion(),
        ]
    }

    #[test]
    fn small_constructions() {
        assert_eq!(FiniteGroup::cyclic(1).unwrap().order(), 1);
        let z2 = FiniteGroup::cyclic(2).unwrap();
        let k = FiniteGroup::direct_product(&z2, &z2);
        assert_eq!(k.order(), 4);
        assert!(k.is_abelian());
        assert!((0..4).all(|s| k.mul(s, s) == 0));
        let s3 = FiniteGroup::symmetric3();
        assert_eq!(s3.order(), 6);
        assert!(!s3.is_abelian());
        assert_eq!(FiniteGroup::dihedral4().order(), 8);
        assert!(!FiniteGroup::dihedral4().is_abelian());
        let q8 = FiniteGroup::quaternion();
        assert!(!q8.is_abelian());
        // exactly one element of order two in Q8
        assert_eq!((1..8).filter(|&s| q8.mul(s, s) == 0).count(), 1);
    }

    #[test]
    fn from_table_rejects_bad_tables() {
        assert!(FiniteGroup::from_table(vec![vec![0, 1], vec![1, 1]]).is_err());
        assert!(FiniteGroup::from_table(vec![vec![0, 1], vec![1]]).is_err());
        // Latin square with identity 0 that is not associative
        let quasi = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        let err = FiniteGroup::from_table(quasi).unwrap_err().to_string();
        assert!(err.contains("associative"), "{err}");
    }

    #[test]
    fn regular_representation() {
        let z2 = FiniteGroup::cyclic(2).unwrap();
        assert_eq!(z2.lambda(0), identity(2));
        assert_eq!(z2.lambda(1), real_matrix(&[&[0.0, 1.0], &[1.0, 0.0]]));
        assert!(z2.regular_rep(2).is_err());
        for g in builtins() {
            for s in g.elements() {
                assert_eq!(g.lambda(s).adjoint(), g.lambda(g.inv(s)));
                assert_eq!(g.rho(s).adjoint(), g.rho(g.inv(s)));
                for t in g.elements() {
                    assert!(residual(&(g.lambda(s) * g.lambda(t)), &g.lambda(g.mul(s, t))) == 0.0);
                    assert!(residual(&(g.rho(s) * g.rho(t)), &g.rho(g.mul(s, t))) == 0.0);
                    // left and right translations commute
                    assert_eq!(g.lambda(s) * g.rho(t), g.rho(t) * g.lambda(s));
                    if s != t {
                        assert_ne!(g.lambda(s), g.lambda(t));
                    }
                }
            }
        }
    }

    #[test]
    fn pauli_cocycle_values() {
        let u = Cocycle::pauli();
        assert_eq!(u.value(1, 2), c64(-1.0, 0.0));
        assert!((0..4).all(|t| u.value(0, t) == ONE));
        assert!(!u.is_trivial(1e-12));
        let g = u.group().clone();
        for s in 0..4 {
            for t in 0..4 {
                let lhs = u.twisted_regular_rep(s) * u.twisted_regular_rep(t);
                let rhs = u.twisted_regular_rep(g.mul(s, t)) * u.value(s, t);
                assert!(residual(&lhs, &rhs) < 1e-14);
            }
        }
    }

    #[test]
    fn perturbed_cocycle_rejected() {
        let u = Cocycle::pauli();
        let mut values: Vec<Vec<C64>> = (0..4).map(|s| (0..4).map(|t| u.value(s, t)).collect()).collect();
        values[1][2] = c64(0.0, 1.0);
        assert!(Cocycle::new(u.group().clone(), values).is_err());
    }

    #[test]
    fn parse_group_file() {
        let g = FiniteGroup::parse("2\n0 1\n1 0\n").unwrap();
        assert_eq!(g.order(), 2);
        assert!(FiniteGroup::parse("2\n0 1\n1 0\nextra\n").is_err());
        assert!(FiniteGroup::parse("2\n0 1\n1 0 0\n").is_err());
        assert!(FiniteGroup::parse("2\n0 1\n1 x\n").is_err());
        assert!(FiniteGroup::parse("").is_err());
    }

    #[test]
    fn parse_cocycle_file() {
        let z2 = FiniteGroup::cyclic(2).unwrap();
        let u = Cocycle::parse(z2.clone(), "1,0 1,0\n1,0 1,0\n").unwrap();
        assert!(u.is_trivial(0.0));
        assert!(Cocycle::parse(z2.clone(), "1,0 1,0\n1,0 1;0\n").is_err());
        assert!(Cocycle::parse(z2, "1,0 1,0\n1,0 1,0\n1,0\n").is_err());
    }
}
