//! Finite root systems: enumeration, the dominance order, and the greedy
//! selection of linearly independent positive roots with pairwise sums
//! that are not roots.

use crate::exact::{q, qi, in_span, QMat, QVec, Q};
use crate::Error;
use std::collections::HashMap;
use std::fmt;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
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
    pub fn parse(c: char) -> Option<Family> {
        match c.to_ascii_uppercase() {
            'A' => Some(Family::A),
            'B' => Some(Family::B),
            'C' => Some(Family::C),
            'D' => Some(Family::D),
            'E' => Some(Family::E),
            'F' => Some(Family::F),
            'G' => Some(Family::G),
            _ => None,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            Family::A => 'A',
            Family::B => 'B',
            Family::C => 'C',
            Family::D => 'D',
            Family::E => 'E',
            Family::F => 'F',
            Family::G => 'G',
        };
        write!(f, "{c}")
    }
}

/// A Cartan type: a product of irreducible factors. Most of the crate uses
/// irreducible types; products (A₁×A₁ in particular) feed the rank-2 test
/// configurations.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CartanType {
    pub factors: Vec<(Family, usize)>,
}

impl CartanType {
    pub fn simple(family: Family, rank: usize) -> Result<Self, Error> {
        let legal = match family {
            Family::A => rank >= 1,
            Family::B => rank >= 2,
            Family::C => rank >= 2,
            Family::D => rank >= 4,
            Family::E => (6..=8).contains(&rank),
            Family::F => rank == 4,
            Family::G => rank == 2,
        };
        if !legal {
            return Err(Error::IllegalType(format!("{family}{rank}")));
        }
        Ok(CartanType {
            factors: vec![(family, rank)],
        })
    }

    pub fn product(factors: Vec<CartanType>) -> Result<Self, Error> {
        if factors.is_empty() {
            return Err(Error::IllegalType("empty product".into()));
        }
        Ok(CartanType {
            factors: factors.into_iter().flat_map(|t| t.factors).collect(),
        })
    }

    /// Parse strings like "A3", "G2", "A1xA1".
    pub fn parse(s: &str) -> Result<Self, Error> {
        let mut factors = Vec::new();
        for part in s.split(['x', 'X']) {
            let part = part.trim();
            let mut chars = part.chars();
            let fam = chars
                .next()
                .and_then(Family::parse)
                .ok_or_else(|| Error::IllegalType(s.into()))?;
            let rank: usize = chars
                .as_str()
                .parse()
                .map_err(|_| Error::IllegalType(s.into()))?;
            factors.push(CartanType::simple(fam, rank)?);
        }
        CartanType::product(factors)
    }

    pub fn rank(&self) -> usize {
        self.factors.iter().map(|&(_, r)| r).sum()
    }

    pub fn is_irreducible(&self) -> bool {
        self.factors.len() == 1
    }

    pub fn name(&self) -> String {
        self.factors
            .iter()
            .map(|(f, r)| format!("{f}{r}"))
            .collect::<Vec<_>>()
            .join("x")
    }

    /// Closed-form number of positive roots.
    pub fn positive_root_count(&self) -> usize {
        self.factors
            .iter()
            .map(|&(f, n)| match f {
                Family::A => n * (n + 1) / 2,
                Family::B | Family::C => n * n,
                Family::D => n * (n - 1),
                Family::G => 6,
                Family::F => 24,
                Family::E => match n {
                    6 => 36,
                    7 => 63,
                    _ => 120,
                },
            })
            .sum()
    }

    /// Closed-form Weyl group order.
    pub fn weyl_order(&self) -> u64 {
        fn fact(n: u64) -> u64 {
            (1..=n).product()
        }
        self.factors
            .iter()
            .map(|&(f, n)| {
                let n = n as u64;
                match f {
                    Family::A => fact(n + 1),
                    Family::B | Family::C => (1u64 << n) * fact(n),
                    Family::D => (1u64 << (n - 1)) * fact(n),
                    Family::G => 12,
                    Family::F => 1152,
                    Family::E => match n {
                        6 => 51840,
                        7 => 2903040,
                        _ => 696729600,
                    },
                }
            })
            .product()
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

/// A root, stored both in ambient coordinates (exact rationals in the
/// standard realization) and as integer coefficients on the simple roots.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Root {
    pub ambient: QVec,
    pub simple_coords: Vec<i64>,
}

impl Root {
    pub fn height(&self) -> i64 {
        self.simple_coords.iter().sum()
    }

    pub fn is_positive(&self) -> bool {
        self.simple_coords.iter().all(|&c| c >= 0) && self.height() > 0
    }
}

/// A root system with its positive roots in canonical order:
/// by height, then lexicographically on simple coordinates.
#[derive(Clone, Debug)]
pub struct RootSystem {
    pub cartan_type: CartanType,
    pub simple_roots: Vec<Root>,
    pub positive_roots: Vec<Root>,
}

/// Simple roots of an irreducible type in the standard (Bourbaki) ambient
/// realization. Ambient dimensions: A_n → n+1, B/C/D_n → n, G₂ → 3 (the
/// sum-zero model), F₄ → 4, E₆/E₇/E₈ → 8.
fn simple_roots_irreducible(family: Family, n: usize) -> Vec<QVec> {
    let e = |dim: usize, i: usize| {
        let mut v = QVec::zeros(dim);
        v.0[i] = qi(1);
        v
    };
    match family {
        Family::A => {
            let dim = n + 1;
            (0..n).map(|i| &e(dim, i) - &e(dim, i + 1)).collect()
        }
        Family::B => {
            let mut v: Vec<QVec> = (0..n - 1).map(|i| &e(n, i) - &e(n, i + 1)).collect();
            v.push(e(n, n - 1));
            v
        }
        Family::C => {
            let mut v: Vec<QVec> = (0..n - 1).map(|i| &e(n, i) - &e(n, i + 1)).collect();
            v.push(e(n, n - 1).scale(qi(2)));
            v
        }
        Family::D => {
            let mut v: Vec<QVec> = (0..n - 1).map(|i| &e(n, i) - &e(n, i + 1)).collect();
            v.push(&e(n, n - 2) + &e(n, n - 1));
            v
        }
        Family::G => {
            // Sum-zero model in R^3: short a = e1-e2, long b = -2e1+e2+e3.
            vec![
                QVec::from_ints(&[1, -1, 0]),
                QVec::from_ints(&[-2, 1, 1]),
            ]
        }
        Family::F => {
            vec![
                QVec::from_ints(&[0, 1, -1, 0]),
                QVec::from_ints(&[0, 0, 1, -1]),
                QVec::from_ints(&[0, 0, 0, 1]),
                QVec(vec![q(1, 2), q(-1, 2), q(-1, 2), q(-1, 2)]),
            ]
        }
        Family::E => {
            // E8 simple roots (Bourbaki); E7, E6 take the first 7 resp. 6.
            let mut v = vec![
                QVec(vec![
                    q(1, 2),
                    q(-1, 2),
                    q(-1, 2),
                    q(-1, 2),
                    q(-1, 2),
                    q(-1, 2),
                    q(-1, 2),
                    q(1, 2),
                ]),
                QVec::from_ints(&[1, 1, 0, 0, 0, 0, 0, 0]),
            ];
            // alpha_{k+2} = e_{k+1} - e_k for k = 1..6 (1-indexed Bourbaki).
            for k in 1..=6 {
                let mut r = QVec::zeros(8);
                r.0[k] = qi(1);
                r.0[k - 1] = qi(-1);
                v.push(r);
            }
            v.truncate(n);
            v
        }
    }
}

fn block_diag_embed(vecs: &[QVec], offset: usize, total: usize) -> Vec<QVec> {
    vecs.iter()
        .map(|v| {
            let mut w = QVec::zeros(total);
            for (i, x) in v.0.iter().enumerate() {
                w.0[offset + i] = *x;
            }
            w
        })
        .collect()
}

fn canonical_sort(roots: &mut [Root]) {
    roots.sort_by(|a, b| {
        a.height()
            .cmp(&b.height())
            .then_with(|| a.simple_coords.cmp(&b.simple_coords))
    });
}

/// Canonical ordering comparator on positive roots (height, then lex).
pub fn canonical_cmp(a: &Root, b: &Root) -> std::cmp::Ordering {
    a.height()
        .cmp(&b.height())
        .then_with(|| a.simple_coords.cmp(&b.simple_coords))
}

/// Enumerate the positive roots of `t` by closing the simple roots under
/// the reflections s_α(β) = β − 2(β,α)/(α,α)·α.
pub fn enumerate_positive_roots(t: &CartanType) -> Result<RootSystem, Error> {
    let rank = t.rank();
    let ambient_dims: Vec<usize> = t
        .factors
        .iter()
        .map(|&(f, n)| simple_roots_irreducible(f, n)[0].len())
        .collect();
    let total_dim: usize = ambient_dims.iter().sum();

    // Simple roots of the product, block-embedded.
    let mut simple_amb: Vec<QVec> = Vec::new();
    let mut offset = 0;
    for (k, &(f, n)) in t.factors.iter().enumerate() {
        let block = simple_roots_irreducible(f, n);
        simple_amb.extend(block_diag_embed(&block, offset, total_dim));
        offset += ambient_dims[k];
    }
    debug_assert_eq!(simple_amb.len(), rank);

    let simple_roots: Vec<Root> = simple_amb
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let mut c = vec![0i64; rank];
            c[i] = 1;
            Root {
                ambient: a.clone(),
                simple_coords: c,
            }
        })
        .collect();

    // Closure under simple reflections, tracking simple coordinates via
    // the integer Cartan pairings.
    let norms: Vec<Q> = simple_amb.iter().map(|a| a.dot(a)).collect();
    let mut seen: HashMap<Vec<i64>, Root> = HashMap::new();
    let mut queue: Vec<Root> = simple_roots.clone();
    for r in &simple_roots {
        seen.insert(r.simple_coords.clone(), r.clone());
    }
    while let Some(r) = queue.pop() {
        for (i, alpha) in simple_amb.iter().enumerate() {
            let pairing = qi(2) * r.ambient.dot(alpha) / norms[i];
            debug_assert!(pairing.is_integer(), "non-integral Cartan pairing");
            let c = pairing.to_integer();
            if c == 0 {
                continue;
            }
            let mut coords = r.simple_coords.clone();
            coords[i] -= c;
            let refl = Root {
                ambient: &r.ambient - &alpha.scale(Q::from_integer(c)),
                simple_coords: coords,
            };
            if refl.is_positive() && !seen.contains_key(&refl.simple_coords) {
                seen.insert(refl.simple_coords.clone(), refl.clone());
                queue.push(refl);
            }
        }
    }

    let mut positive_roots: Vec<Root> = seen.into_values().collect();
    canonical_sort(&mut positive_roots);

    let expected = t.positive_root_count();
    if positive_roots.len() != expected {
        return Err(Error::Internal(format!(
            "positive root count for {}: got {}, expected {expected}",
            t.name(),
            positive_roots.len()
        )));
    }
    Ok(RootSystem {
        cartan_type: t.clone(),
        simple_roots,
        positive_roots,
    })
}

impl RootSystem {
    pub fn rank(&self) -> usize {
        self.cartan_type.rank()
    }

    pub fn contains(&self, r: &Root) -> bool {
        self.positive_roots
            .iter()
            .any(|p| p.simple_coords == r.simple_coords)
    }

    /// Is `coords` the simple-coordinate vector of a root (either sign)?
    pub fn is_root_coords(&self, coords: &[i64]) -> bool {
        let neg: Vec<i64> = coords.iter().map(|c| -c).collect();
        self.positive_roots
            .iter()
            .any(|p| p.simple_coords == coords || p.simple_coords == neg)
    }

    pub fn find(&self, coords: &[i64]) -> Option<&Root> {
        self.positive_roots
            .iter()
            .find(|p| p.simple_coords == coords)
    }
}

/// Dominance order: α ≤ β iff β − α is a nonnegative combination of
/// simple roots, i.e. nonnegative in every simple coordinate.
pub fn dominance_leq(alpha: &Root, beta: &Root, rs: &RootSystem) -> Result<bool, Error> {
    if !rs.contains(alpha) || !rs.contains(beta) {
        return Err(Error::RootNotInSystem);
    }
    Ok(alpha
        .simple_coords
        .iter()
        .zip(&beta.simple_coords)
        .all(|(a, b)| b - a >= 0))
}

fn coords_qvec(r: &Root) -> QVec {
    QVec::from_ints(&r.simple_coords)
}

/// Greedy selection: repeatedly take the biggest positive root (dominance
/// order, ties broken by the canonical ordering) outside the span of the
/// roots chosen so far. Returns rank-many roots whose pairwise sums are
/// not roots; that property is re-verified explicitly.
pub fn select_strongly_commuting_roots(rs: &RootSystem) -> Result<Vec<Root>, Error> {
    let rank = rs.rank();
    let mut chosen: Vec<Root> = Vec::new();
    while chosen.len() < rank {
        let span: Vec<QVec> = chosen.iter().map(coords_qvec).collect();
        let candidates: Vec<&Root> = rs
            .positive_roots
            .iter()
            .filter(|r| !in_span(&span, &coords_qvec(r)))
            .collect();
        if candidates.is_empty() {
            return Err(Error::Internal(
                "selection ran out of candidates before reaching the rank".into(),
            ));
        }
        let maximal: Vec<&Root> = candidates
            .iter()
            .filter(|r| {
                !candidates.iter().any(|s| {
                    s.simple_coords != r.simple_coords
                        && r.simple_coords
                            .iter()
                            .zip(&s.simple_coords)
                            .all(|(a, b)| b - a >= 0)
                })
            })
            .cloned()
            .collect();
        let pick = maximal
            .into_iter()
            .max_by(|a, b| canonical_cmp(a, b))
            .expect("nonempty maximal set");
        chosen.push(pick.clone());
    }
    if !is_sum_free_independent(&chosen, rs) {
        return Err(Error::PostconditionViolated(
            "selected roots are not sum-free independent".into(),
        ));
    }
    Ok(chosen)
}

/// True iff the roots are linearly independent and no pairwise sum is a
/// root of the system (either sign).
pub fn is_sum_free_independent(roots: &[Root], rs: &RootSystem) -> bool {
    if roots.is_empty() {
        return true;
    }
    let m = QMat::from_cols(&roots.iter().map(coords_qvec).collect::<Vec<_>>());
    if m.rank() != roots.len() {
        return false;
    }
    for i in 0..roots.len() {
        for j in (i + 1)..roots.len() {
            let sum: Vec<i64> = roots[i]
                .simple_coords
                .iter()
                .zip(&roots[j].simple_coords)
                .map(|(a, b)| a + b)
                .collect();
            if rs.is_root_coords(&sum) {
                return false;
            }
        }
    }
    true
}
