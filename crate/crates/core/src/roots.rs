//! Finite Cartan types: Cartan matrices, Weyl-group degrees, Coxeter numbers
//! and positive roots.
//!
//! Vertex labels are fixed so that the closed-form fixed points in
//! [`crate::fixpoint::closed_form_a`] satisfy the fixed-point equations
//! verbatim:
//!
//! * `A_n`, `D_n`: the usual chain, with `D_n` branching at node `n-2`.
//! * `B_n`: chain with `a[n][n-1] = -2`, `a[n-1][n] = -1`.
//! * `C_n`: chain with `a[n-1][n] = -2`, `a[n][n-1] = -1`.
//! * `E_6..E_8`: chain `1-2-3-5-6-7-8` with node `4` attached to node `3`.
//! * `F_4`: chain with `a[2][3] = -2`, `a[3][2] = -1`.
//! * `G_2`: `a[1][2] = -1`, `a[2][1] = -3`.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instrument::{hit, Op};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Family {
    fn letter(self) -> char {
        match self {
            Family::A => 'A',
            Family::B => 'B',
            Family::C => 'C',
            Family::D => 'D',
            Family::E => 'E',
            Family::F => 'F',
            Family::G => 'G',
        }
    }

    /// Inclusive range of supported ranks.
    pub fn rank_range(self) -> (usize, usize) {
        match self {
            Family::A => (1, 12),
            Family::B => (2, 8),
            Family::C => (3, 8),
            Family::D => (4, 8),
            Family::E => (6, 8),
            Family::F => (4, 4),
            Family::G => (2, 2),
        }
    }
}

/// A family letter together with a rank, e.g. `E8`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CartanType {
    pub family: Family,
    pub rank: usize,
}

impl CartanType {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        let (lo, hi) = family.rank_range();
        if rank < lo {
            return Err(Error::InvalidType(format!("{}{}", family.letter(), rank)));
        }
        if rank > hi {
            // Exceptional families have exactly one admissible rank per letter
            // (E has three); anything else is not a finite type at all.
            return match family {
                Family::E | Family::F | Family::G => {
                    Err(Error::InvalidType(format!("{}{}", family.letter(), rank)))
                }
                _ => Err(Error::UnsupportedRank {
                    family,
                    rank,
                    max: hi,
                }),
            };
        }
        Ok(CartanType { family, rank })
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family.letter(), self.rank)
    }
}

/// Parses `a2`, `E8`, `f4`, ... (case-insensitive). `F` and `G` may omit the
/// rank; an explicit mismatched rank is rejected.
impl FromStr for CartanType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut chars = s.chars();
        let letter = chars
            .next()
            .ok_or_else(|| Error::InvalidType(s.to_string()))?;
        let family = match letter.to_ascii_uppercase() {
            'A' => Family::A,
            'B' => Family::B,
            'C' => Family::C,
            'D' => Family::D,
            'E' => Family::E,
            'F' => Family::F,
            'G' => Family::G,
            _ => return Err(Error::InvalidType(s.to_string())),
        };
        let digits = chars.as_str();
        let rank = if digits.is_empty() {
            match family {
                Family::F => 4,
                Family::G => 2,
                _ => return Err(Error::InvalidType(s.to_string())),
            }
        } else {
            if !digits.bytes().all(|b| b.is_ascii_digit()) || digits.len() > 3 {
                return Err(Error::InvalidType(s.to_string()));
            }
            digits
                .parse::<usize>()
                .map_err(|_| Error::InvalidType(s.to_string()))?
        };
        CartanType::new(family, rank)
    }
}

/// Every type covered by the verification suite, in canonical order.
pub fn supported_types() -> Vec<CartanType> {
    let mut out = Vec::new();
    for family in [
        Family::A,
        Family::B,
        Family::C,
        Family::D,
        Family::E,
        Family::F,
        Family::G,
    ] {
        let (lo, hi) = family.rank_range();
        for rank in lo..=hi {
            out.push(CartanType { family, rank });
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct CartanSpec {
    pub kind: CartanType,
    /// `cartan[(i, j)] = a_{i,j}`, zero-based.
    pub cartan: DMatrix<i64>,
    pub coxeter_number: u32,
    /// Weyl-group degrees, sorted ascending.
    pub degrees: Vec<u32>,
    /// Whether the longest Weyl group element acts as `-1` on the roots.
    pub minus_one: bool,
}

impl CartanSpec {
    pub fn rank(&self) -> usize {
        self.kind.rank
    }

    #[inline]
    pub fn a(&self, i: usize, j: usize) -> i64 {
        self.cartan[(i, j)]
    }

    pub fn cartan_f64(&self) -> DMatrix<f64> {
        self.cartan.map(|v| v as f64)
    }

    /// Minimal positive integers `d_i` with `diag(d) * A` symmetric.
    pub fn symmetrizer(&self) -> Option<Vec<i64>> {
        symmetrizer(&self.cartan)
    }
}

/// Minimal positive integer symmetrizer of a (connected) generalized Cartan
/// matrix, or `None` if the matrix is not symmetrizable.
pub fn symmetrizer(a: &DMatrix<i64>) -> Option<Vec<i64>> {
    let n = a.nrows();
    if n == 0 || a.ncols() != n {
        return None;
    }
    // d_i as reduced fractions num/den, propagated along edges:
    // d_i a_ij = d_j a_ji  =>  d_j = d_i a_ij / a_ji.
    let mut frac: Vec<Option<(i64, i64)>> = vec![None; n];
    for root in 0..n {
        if frac[root].is_some() {
            continue;
        }
        frac[root] = Some((1, 1));
        let mut queue = VecDeque::from([root]);
        while let Some(i) = queue.pop_front() {
            let (num, den) = frac[i].unwrap();
            for j in 0..n {
                if i == j || (a[(i, j)] == 0 && a[(j, i)] == 0) {
                    continue;
                }
                if a[(i, j)] == 0 || a[(j, i)] == 0 {
                    return None;
                }
                let (nn, dd) = reduce(num * a[(i, j)], den * a[(j, i)]);
                match frac[j] {
                    None => {
                        frac[j] = Some((nn, dd));
                        queue.push_back(j);
                    }
                    Some(existing) if existing != (nn, dd) => return None,
                    Some(_) => {}
                }
            }
        }
    }
    let lcm_den = frac.iter().fold(1i64, |acc, f| lcm(acc, f.unwrap().1));
    let mut d: Vec<i64> = frac
        .iter()
        .map(|f| {
            let (num, den) = f.unwrap();
            num * (lcm_den / den)
        })
        .collect();
    if d.iter().any(|&v| v <= 0) {
        return None;
    }
    let g = d.iter().fold(0i64, |acc, &v| gcd(acc, v));
    for v in &mut d {
        *v /= g;
    }
    for i in 0..n {
        for j in 0..n {
            if d[i] * a[(i, j)] != d[j] * a[(j, i)] {
                return None;
            }
        }
    }
    Some(d)
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: i64, b: i64) -> i64 {
    a / gcd(a, b) * b
}

fn reduce(num: i64, den: i64) -> (i64, i64) {
    let g = gcd(num, den).max(1);
    let (num, den) = (num / g, den / g);
    if den < 0 {
        (-num, -den)
    } else {
        (num, den)
    }
}

pub fn cartan_matrix(kind: CartanType) -> Result<CartanSpec> {
    hit(Op::CartanMatrix);
    let kind = CartanType::new(kind.family, kind.rank)?;
    let n = kind.rank;
    let mut a = DMatrix::<i64>::zeros(n, n);
    for i in 0..n {
        a[(i, i)] = 2;
    }
    let mut link = |i: usize, j: usize, aij: i64, aji: i64| {
        a[(i - 1, j - 1)] = aij;
        a[(j - 1, i - 1)] = aji;
    };
    match kind.family {
        Family::A => {
            for i in 1..n {
                link(i, i + 1, -1, -1);
            }
        }
        Family::B => {
            for i in 1..n - 1 {
                link(i, i + 1, -1, -1);
            }
            link(n - 1, n, -1, -2);
        }
        Family::C => {
            for i in 1..n - 1 {
                link(i, i + 1, -1, -1);
            }
            link(n - 1, n, -2, -1);
        }
        Family::D => {
            for i in 1..n - 1 {
                link(i, i + 1, -1, -1);
            }
            link(n - 2, n, -1, -1);
        }
        Family::E => {
            link(1, 2, -1, -1);
            link(2, 3, -1, -1);
            link(3, 4, -1, -1);
            link(3, 5, -1, -1);
            for i in 5..n {
                link(i, i + 1, -1, -1);
            }
        }
        Family::F => {
            link(1, 2, -1, -1);
            link(2, 3, -2, -1);
            link(3, 4, -1, -1);
        }
        Family::G => {
            link(1, 2, -1, -3);
        }
    }

    let (h, degrees): (u32, Vec<u32>) = match kind.family {
        Family::A => (n as u32 + 1, (2..=n as u32 + 1).collect()),
        Family::B | Family::C => (2 * n as u32, (1..=n as u32).map(|k| 2 * k).collect()),
        Family::D => {
            let mut d: Vec<u32> = (1..n as u32).map(|k| 2 * k).collect();
            d.push(n as u32);
            d.sort_unstable();
            (2 * (n as u32 - 1), d)
        }
        Family::E => match n {
            6 => (12, vec![2, 5, 6, 8, 9, 12]),
            7 => (18, vec![2, 6, 8, 10, 12, 14, 18]),
            _ => (30, vec![2, 8, 12, 14, 18, 20, 24, 30]),
        },
        Family::F => (12, vec![2, 6, 8, 12]),
        Family::G => (6, vec![2, 6]),
    };

    let minus_one = match kind.family {
        Family::A => n == 1,
        Family::B | Family::C => true,
        Family::D => n % 2 == 0,
        Family::E => n != 6,
        Family::F | Family::G => true,
    };

    Ok(CartanSpec {
        kind,
        cartan: a,
        coxeter_number: h,
        degrees,
        minus_one,
    })
}

/// Convenience: parse and build in one go.
pub fn spec(name: &str) -> Result<CartanSpec> {
    cartan_matrix(name.parse()?)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RootSystem {
    pub simple_rank: usize,
    /// Positive roots in simple-root coordinates, sorted by height.
    pub positive_roots: Vec<Vec<i64>>,
    pub heights: Vec<u32>,
}

impl RootSystem {
    pub fn max_height(&self) -> u32 {
        self.heights.iter().copied().max().unwrap_or(0)
    }

    pub fn count_at_height(&self, j: u32) -> usize {
        self.heights.iter().filter(|&&h| h == j).count()
    }
}

/// Positive roots by breadth-first closure from the simple roots.
///
/// `beta + alpha_k` is added when the `alpha_k`-string through `beta` extends
/// upward, i.e. `p - <beta, alpha_k^vee> > 0` where `p` is how far the string
/// extends downward. The pairing comes from the symmetrized form `diag(d) A`.
pub fn enumerate_positive_roots(spec: &CartanSpec) -> RootSystem {
    hit(Op::EnumeratePositiveRoots);
    let n = spec.rank();
    let d = spec
        .symmetrizer()
        .expect("finite Cartan matrices are symmetrizable");
    let form = |x: &[i64], k: usize| -> i64 { (0..n).map(|i| x[i] * d[i] * spec.a(i, k)).sum() };

    let mut known: HashSet<Vec<i64>> = HashSet::new();
    let mut roots: Vec<Vec<i64>> = Vec::new();
    let mut layer: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            let mut e = vec![0; n];
            e[i] = 1;
            e
        })
        .collect();
    for r in &layer {
        known.insert(r.clone());
    }

    while !layer.is_empty() {
        roots.extend(layer.iter().cloned());
        let mut next = Vec::new();
        for beta in &layer {
            for k in 0..n {
                // <beta, alpha_k^vee> = 2 (beta, alpha_k) / (alpha_k, alpha_k)
                let pairing = 2 * form(beta, k) / (2 * d[k]);
                let mut p = 0;
                let mut down = beta.clone();
                loop {
                    down[k] -= 1;
                    if known.contains(&down) {
                        p += 1;
                    } else {
                        break;
                    }
                }
                if p - pairing > 0 {
                    let mut up = beta.clone();
                    up[k] += 1;
                    if known.insert(up.clone()) {
                        next.push(up);
                    }
                }
            }
        }
        next.sort();
        layer = next;
    }

    let heights = roots.iter().map(|r| r.iter().sum::<i64>() as u32).collect();
    RootSystem {
        simple_rank: n,
        positive_roots: roots,
        heights,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct KostantRow {
    pub j: u32,
    /// `#{i : d_i >= j + 1}`
    pub lhs: usize,
    /// `#{beta > 0 : ht(beta) = j}`
    pub rhs: usize,
}

pub fn kostant_counts(spec: &CartanSpec, roots: &RootSystem) -> Vec<KostantRow> {
    hit(Op::KostantCounts);
    (1..=spec.coxeter_number + 1)
        .map(|j| KostantRow {
            j,
            lhs: spec.degrees.iter().filter(|&&d| d > j).count(),
            rhs: roots.count_at_height(j),
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClusterCounts {
    pub cluster_variables: u64,
    pub clusters: u64,
}

/// Number of cluster variables `sum d_i` and clusters `prod (d_i + h) / d_i`,
/// the latter in exact integer arithmetic.
pub fn count_formulas(spec: &CartanSpec) -> Result<ClusterCounts> {
    hit(Op::CountFormulas);
    let h = spec.coxeter_number as u128;
    let num: u128 = spec.degrees.iter().map(|&d| d as u128 + h).product();
    let den: u128 = spec.degrees.iter().map(|&d| d as u128).product();
    if !num.is_multiple_of(den) {
        return Err(Error::Internal(format!(
            "cluster count {num}/{den} is not an integer for {}",
            spec.kind
        )));
    }
    Ok(ClusterCounts {
        cluster_variables: spec.degrees.iter().map(|&d| d as u64).sum(),
        clusters: (num / den) as u64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_matrices() {
        let g2 = spec("G2").unwrap();
        assert_eq!(g2.cartan, DMatrix::from_row_slice(2, 2, &[2, -1, -3, 2]));
        let b2 = spec("b2").unwrap();
        assert_eq!(b2.cartan, DMatrix::from_row_slice(2, 2, &[2, -1, -2, 2]));
        let a1 = spec("A1").unwrap();
        assert_eq!(a1.cartan, DMatrix::from_row_slice(1, 1, &[2]));
        assert_eq!(a1.coxeter_number, 2);
        assert_eq!(a1.degrees, vec![2]);
    }

    #[test]
    fn parse_grammar() {
        assert_eq!("f4".parse::<CartanType>().unwrap().rank, 4);
        assert_eq!("G".parse::<CartanType>().unwrap().rank, 2);
        assert!("F5".parse::<CartanType>().is_err());
        assert!("E9".parse::<CartanType>().is_err());
        assert!("E".parse::<CartanType>().is_err());
        assert!("C2".parse::<CartanType>().is_err());
        assert!("D3".parse::<CartanType>().is_err());
        assert!("A0".parse::<CartanType>().is_err());
        assert!("X3".parse::<CartanType>().is_err());
        assert!("A-1".parse::<CartanType>().is_err());
        assert!(matches!(
            "A13".parse::<CartanType>(),
            Err(Error::UnsupportedRank { .. })
        ));
    }

    #[test]
    fn cartan_axioms_and_degrees() {
        for t in supported_types() {
            let s = cartan_matrix(t).unwrap();
            let n = s.rank();
            for i in 0..n {
                assert_eq!(s.a(i, i), 2);
                for j in 0..n {
                    if i != j {
                        assert!(s.a(i, j) <= 0);
                    }
                }
            }
            assert!(s.symmetrizer().is_some(), "{t}");
            let h = s.coxeter_number;
            assert_eq!(s.degrees[0], 2);
            assert_eq!(*s.degrees.last().unwrap(), h);
            for i in 0..n {
                assert_eq!(s.degrees[i] + s.degrees[n - 1 - i], h + 2, "{t}");
            }
            let sum: u32 = s.degrees.iter().sum();
            assert_eq!(2 * sum, n as u32 * (h + 2));
        }
    }

    #[test]
    fn minus_one_types() {
        let yes = ["A1", "B3", "C4", "D4", "D6", "E7", "E8", "F4", "G2"];
        let no = ["A2", "A5", "D5", "D7", "E6"];
        for t in yes {
            assert!(spec(t).unwrap().minus_one, "{t}");
        }
        for t in no {
            assert!(!spec(t).unwrap().minus_one, "{t}");
        }
    }

    #[test]
    fn root_examples() {
        let a2 = enumerate_positive_roots(&spec("A2").unwrap());
        let mut r = a2.positive_roots.clone();
        r.sort();
        assert_eq!(r, vec![vec![0, 1], vec![1, 0], vec![1, 1]]);
        let mut hts = a2.heights.clone();
        hts.sort();
        assert_eq!(hts, vec![1, 1, 2]);

        let g2 = enumerate_positive_roots(&spec("G2").unwrap());
        let mut hts = g2.heights.clone();
        hts.sort();
        assert_eq!(hts, vec![1, 1, 2, 3, 4, 5]);

        let e8 = enumerate_positive_roots(&spec("E8").unwrap());
        assert_eq!(e8.positive_roots.len(), 120);
        assert_eq!(e8.max_height(), 29);
    }

    #[test]
    fn root_counts_all_types() {
        for t in supported_types() {
            let s = cartan_matrix(t).unwrap();
            let rs = enumerate_positive_roots(&s);
            let n = s.rank();
            let h = s.coxeter_number as usize;
            assert_eq!(rs.positive_roots.len(), n * h / 2, "{t}");
            assert_eq!(rs.max_height() as usize, h - 1, "{t}");
            assert_eq!(rs.count_at_height(1), n, "{t}");
        }
    }

    #[test]
    fn kostant_examples() {
        let s = spec("A2").unwrap();
        let rows = kostant_counts(&s, &enumerate_positive_roots(&s));
        assert_eq!(
            rows[0],
            KostantRow {
                j: 1,
                lhs: 2,
                rhs: 2
            }
        );
        assert_eq!(
            rows[1],
            KostantRow {
                j: 2,
                lhs: 1,
                rhs: 1
            }
        );
        for t in supported_types() {
            let s = cartan_matrix(t).unwrap();
            let rows = kostant_counts(&s, &enumerate_positive_roots(&s));
            assert_eq!(rows.len() as u32, s.coxeter_number + 1);
            for row in rows {
                assert_eq!(row.lhs, row.rhs, "{t} j={}", row.j);
                if row.j == s.coxeter_number {
                    assert_eq!((row.lhs, row.rhs), (0, 0));
                }
            }
        }
    }

    #[test]
    fn count_examples() {
        let c = count_formulas(&spec("A2").unwrap()).unwrap();
        assert_eq!((c.cluster_variables, c.clusters), (5, 5));
        let c = count_formulas(&spec("A1").unwrap()).unwrap();
        assert_eq!((c.cluster_variables, c.clusters), (2, 2));
        let c = count_formulas(&spec("G2").unwrap()).unwrap();
        assert_eq!((c.cluster_variables, c.clusters), (8, 8));
        // Catalan numbers for A_n.
        let c = count_formulas(&spec("A3").unwrap()).unwrap();
        assert_eq!(c.clusters, 14);
        let c = count_formulas(&spec("E8").unwrap()).unwrap();
        assert_eq!(c.clusters, 25080);
    }

    #[test]
    fn symmetrizer_rejects_asymmetric_pattern() {
        let bad = DMatrix::from_row_slice(3, 3, &[2, -1, 0, -2, 2, -1, 0, -1, 2]);
        assert_eq!(symmetrizer(&bad), Some(vec![2, 1, 1]));
        // cycle with inconsistent ratios
        let cyc = DMatrix::from_row_slice(3, 3, &[2, -1, -2, -2, 2, -1, -1, -1, 2]);
        assert_eq!(symmetrizer(&cyc), None);
    }
}
