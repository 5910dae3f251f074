//! Regular trees T_q and their n-fold products as rank-n Euclidean
//! buildings of type A₁ⁿ: exact Busemann functions, branching points,
//! cross-section projections, and the verification of the branching and
//! union-of-flats path lemmas with their explicit constants.

use crate::Error;
use serde::{Deserialize, Serialize};

/// A vertex of T_q: a word over {0,…,q−1} with no two equal consecutive
/// letters. The empty word is the root.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TreeVertex {
    pub word: Vec<u8>,
}

impl TreeVertex {
    pub fn root() -> Self {
        TreeVertex { word: vec![] }
    }

    pub fn new(word: Vec<u8>, q: u8) -> Result<Self, Error> {
        for (k, &c) in word.iter().enumerate() {
            if c >= q {
                return Err(Error::ConfigError(format!("letter {c} out of range")));
            }
            if k > 0 && word[k - 1] == c {
                return Err(Error::ConfigError("repeated consecutive letter".into()));
            }
        }
        Ok(TreeVertex { word })
    }

    pub fn depth(&self) -> usize {
        self.word.len()
    }

    pub fn parent(&self) -> Option<TreeVertex> {
        if self.word.is_empty() {
            return None;
        }
        let mut w = self.word.clone();
        w.pop();
        Some(TreeVertex { word: w })
    }

    pub fn child(&self, letter: u8) -> TreeVertex {
        debug_assert!(self.word.last() != Some(&letter));
        let mut w = self.word.clone();
        w.push(letter);
        TreeVertex { word: w }
    }

    /// Neighbors in T_q: the parent plus all legal children (the root has
    /// q children, every other vertex q−1 children and a parent).
    pub fn neighbors(&self, q: u8) -> Vec<TreeVertex> {
        let mut out = Vec::new();
        if let Some(p) = self.parent() {
            out.push(p);
        }
        for c in 0..q {
            if self.word.last() != Some(&c) {
                out.push(self.child(c));
            }
        }
        out
    }
}

fn lcp_len(a: &[u8], b: &[u8]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

/// d(u, v) = |u| + |v| − 2·|longest common prefix|.
pub fn tree_distance(u: &TreeVertex, v: &TreeVertex) -> usize {
    let l = lcp_len(&u.word, &v.word);
    u.word.len() + v.word.len() - 2 * l
}

/// An end of T_q: an eventually periodic address stream.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TreeEnd {
    pub prefix: Vec<u8>,
    pub period: Vec<u8>,
}

impl TreeEnd {
    pub fn new(prefix: Vec<u8>, period: Vec<u8>, q: u8) -> Result<Self, Error> {
        if period.is_empty() {
            return Err(Error::ConfigError("empty period".into()));
        }
        let e = TreeEnd { prefix, period };
        // Validate no-repeat across a window covering all adjacencies.
        let n = e.prefix.len() + 2 * e.period.len() + 1;
        for k in 0..n {
            if e.letter(k) >= q {
                return Err(Error::ConfigError("letter out of range".into()));
            }
            if k > 0 && e.letter(k) == e.letter(k - 1) {
                return Err(Error::ConfigError("repeated consecutive letter".into()));
            }
        }
        Ok(e)
    }

    pub fn letter(&self, k: usize) -> u8 {
        if k < self.prefix.len() {
            self.prefix[k]
        } else {
            self.period[(k - self.prefix.len()) % self.period.len()]
        }
    }

    /// The vertex at depth k on the ray from the root to this end.
    pub fn stream_vertex(&self, k: usize) -> TreeVertex {
        TreeVertex {
            word: (0..k).map(|i| self.letter(i)).collect(),
        }
    }

    /// Length of the longest common prefix of `v` and the stream.
    pub fn meet_len(&self, v: &TreeVertex) -> usize {
        v.word
            .iter()
            .enumerate()
            .take_while(|(k, &c)| self.letter(*k) == c)
            .count()
    }

    /// Semantic equality of ends (streams eventually agree iff they agree
    /// on a window longer than both transients plus both periods).
    pub fn same_end(&self, other: &TreeEnd) -> bool {
        let n = self.prefix.len().max(other.prefix.len())
            + self.period.len() * other.period.len()
            + self.period.len()
            + other.period.len();
        (0..n).all(|k| self.letter(k) == other.letter(k))
    }
}

/// Exact Busemann function of η normalized at `base`:
/// b(x) = (|x| − 2·meet(x)) − (|base| − 2·meet(base)).
pub fn busemann(x: &TreeVertex, eta: &TreeEnd, base: &TreeVertex) -> i64 {
    let raw = |v: &TreeVertex| v.word.len() as i64 - 2 * eta.meet_len(v) as i64;
    raw(x) - raw(base)
}

/// One step from `v` along the geodesic ray [v, η).
pub fn step_toward_end(v: &TreeVertex, eta: &TreeEnd) -> TreeVertex {
    let m = eta.meet_len(v);
    if m < v.word.len() {
        v.parent().unwrap()
    } else {
        v.child(eta.letter(v.word.len()))
    }
}

/// The branching point of [x, η) and [y, η): their first common vertex.
pub fn branching_point(x: &TreeVertex, y: &TreeVertex, eta: &TreeEnd) -> TreeVertex {
    // Ray from v: ancestors of v down to the meet, then stream vertices.
    let ray = |v: &TreeVertex, upto: usize| -> Vec<TreeVertex> {
        let m = eta.meet_len(v);
        let mut out = Vec::new();
        let mut cur = v.clone();
        while cur.word.len() > m {
            out.push(cur.clone());
            cur = cur.parent().unwrap();
        }
        for k in m..=upto {
            out.push(eta.stream_vertex(k));
        }
        out
    };
    let bound = eta.meet_len(x).max(eta.meet_len(y)) + 1;
    let rx = ray(x, bound);
    let ry = ray(y, bound);
    for v in &rx {
        if ry.contains(v) {
            return v.clone();
        }
    }
    unreachable!("rays to a common end always merge");
}

/// A point of the product building T_qⁿ.
pub type ProductPointT = Vec<TreeVertex>;

/// CAT(0) building distance (L² combination of factor distances).
pub fn product_distance_l2(x: &[TreeVertex], y: &[TreeVertex]) -> f64 {
    x.iter()
        .zip(y)
        .map(|(a, b)| (tree_distance(a, b) as f64).powi(2))
        .sum::<f64>()
        .sqrt()
}

/// L¹ comparison distance (the metric of the embedding target).
pub fn product_distance_l1(x: &[TreeVertex], y: &[TreeVertex]) -> usize {
    x.iter().zip(y).map(|(a, b)| tree_distance(a, b)).sum()
}

/// An apartment of T_qⁿ: one bi-infinite line per factor, each given by a
/// pair of distinct ends.
#[derive(Clone, Debug)]
pub struct ApartmentT {
    /// (minus end, plus end) per factor.
    pub lines: Vec<(TreeEnd, TreeEnd)>,
}

impl ApartmentT {
    pub fn new(lines: Vec<(TreeEnd, TreeEnd)>) -> Result<Self, Error> {
        for (a, b) in &lines {
            if a.same_end(b) {
                return Err(Error::ConfigError(
                    "the two ends of a line must differ".into(),
                ));
            }
        }
        Ok(ApartmentT { lines })
    }

    /// Is `v` on the line of factor `i`?
    pub fn line_contains(&self, i: usize, v: &TreeVertex) -> bool {
        let (minus, plus) = &self.lines[i];
        let div = divergence_len(minus, plus);
        let on_ray = |e: &TreeEnd| {
            v.word.len() >= div && e.meet_len(v) == v.word.len()
        };
        on_ray(minus) || on_ray(plus)
    }

    /// Chart coordinate of a line point: u(v) = −b_{plus}(v) normalized at
    /// the root (increasing toward the plus end).
    pub fn line_coordinate(&self, i: usize, v: &TreeVertex) -> i64 {
        -busemann(v, &self.lines[i].1, &TreeVertex::root())
    }

    /// The vertex of line i at chart coordinate u.
    pub fn line_vertex(&self, i: usize, u: i64) -> TreeVertex {
        let (minus, plus) = &self.lines[i];
        let div = divergence_len(minus, plus) as i64;
        // The stream vertex of `plus` at depth k has coordinate 2·meet−|v|
        // = k for k ≥ div... coordinate of plus-stream depth k is
        // 2k − k = k when the whole word lies on the stream.
        if u >= div {
            plus.stream_vertex(u as usize)
        } else {
            // descend the minus-side: vertex = minus-stream at depth
            // div + (div − u).
            let depth = (2 * div - u) as usize;
            minus.stream_vertex(depth)
        }
    }
}

/// Depth at which the streams of two ends diverge.
pub fn divergence_len(a: &TreeEnd, b: &TreeEnd) -> usize {
    let bound = a.prefix.len().max(b.prefix.len())
        + a.period.len() * b.period.len()
        + a.period.len()
        + b.period.len();
    (0..bound)
        .find(|&k| a.letter(k) != b.letter(k))
        .expect("distinct ends must diverge")
}

/// π_i on the A₁ⁿ building: the i-th coordinate.
pub fn projection_pi(i: usize, x: &[TreeVertex]) -> TreeVertex {
    x[i].clone()
}

/// Ray-following oracle for π_i: walk [x, η_i) — the product ray moving
/// every factor j ≠ i toward its end — and read off the cross-section
/// component, asserting it is stable along the walk.
pub fn projection_pi_oracle(
    i: usize,
    x: &[TreeVertex],
    ends: &[TreeEnd],
    steps: usize,
) -> Result<TreeVertex, Error> {
    let mut cur: Vec<TreeVertex> = x.to_vec();
    let reference = cur[i].clone();
    for _ in 0..steps {
        for (j, e) in ends.iter().enumerate() {
            if j != i {
                cur[j] = step_toward_end(&cur[j], e);
            }
        }
        if cur[i] != reference {
            return Err(Error::PostconditionViolated(
                "cross-section component moved along the ray".into(),
            ));
        }
    }
    Ok(reference)
}

/// A regular direction of the A₁ⁿ apartment at infinity: per-factor ends
/// with positive integer speeds (the direction vector m/‖m‖ is interior
/// to a chamber precisely because every speed is positive).
#[derive(Clone, Debug)]
pub struct RegularDirection {
    pub ends: Vec<TreeEnd>,
    pub speeds: Vec<u64>,
}

impl RegularDirection {
    pub fn new(ends: Vec<TreeEnd>, speeds: Vec<u64>) -> Result<Self, Error> {
        if ends.len() != speeds.len() || ends.is_empty() {
            return Err(Error::ConfigError("ends/speeds length mismatch".into()));
        }
        if speeds.contains(&0) {
            return Err(Error::ConfigError(
                "interior direction needs strictly positive speeds".into(),
            ));
        }
        Ok(RegularDirection { ends, speeds })
    }

    pub fn norm_sq(&self) -> u64 {
        self.speeds.iter().map(|m| m * m).sum()
    }

    /// β = 1/√(2(1 − cos θ)) with θ = 2·arcsin(m_min/‖m‖), i.e.
    /// β = ‖m‖ / (2 m_min); returned as the exact rational β².
    pub fn beta_sq(&self) -> (u64, u64) {
        let m_min = *self.speeds.iter().min().unwrap();
        (self.norm_sq(), 4 * m_min * m_min)
    }

    pub fn beta(&self) -> f64 {
        let (num, den) = self.beta_sq();
        (num as f64 / den as f64).sqrt()
    }
}

/// One verified instance of the branching lemma.
#[derive(Clone, Debug, Serialize)]
pub struct BranchingInstance {
    pub x: ProductPointT,
    pub y: ProductPointT,
    /// Per-factor distance to the branching point (equal from both sides).
    pub arms: Vec<u64>,
    pub d_xy: f64,
    pub d_to_branch: f64,
    pub ratio: f64,
}

/// Distances to the product branching point of [x,η) and [y,η). Errors
/// with NotAsymptotic when the rays do not merge (the per-factor Busemann
/// values must agree in every coordinate).
pub fn product_branching(
    x: &[TreeVertex],
    y: &[TreeVertex],
    eta: &RegularDirection,
) -> Result<BranchingInstance, Error> {
    let n = eta.ends.len();
    assert!(x.len() == n && y.len() == n);
    let root = TreeVertex::root();
    let mut arms = Vec::with_capacity(n);
    for i in 0..n {
        if busemann(&x[i], &eta.ends[i], &root) != busemann(&y[i], &eta.ends[i], &root) {
            return Err(Error::NotAsymptotic);
        }
        let z = branching_point(&x[i], &y[i], &eta.ends[i]);
        let a = tree_distance(&x[i], &z);
        debug_assert_eq!(a, tree_distance(&y[i], &z));
        arms.push(a as u64);
    }
    // The product rays merge at arc length T = ‖m‖·max_i(a_i/m_i) from
    // either endpoint; exact rational comparison against β discussed in
    // `branching_bound_check`.
    let norm = (eta.norm_sq() as f64).sqrt();
    let t = arms
        .iter()
        .zip(&eta.speeds)
        .map(|(&a, &m)| a as f64 / m as f64)
        .fold(0.0f64, f64::max)
        * norm;
    let d_xy = arms
        .iter()
        .map(|&a| (2.0 * a as f64).powi(2))
        .sum::<f64>()
        .sqrt();
    let ratio = if d_xy == 0.0 { 0.0 } else { t / d_xy };
    Ok(BranchingInstance {
        x: x.to_vec(),
        y: y.to_vec(),
        arms,
        d_xy,
        d_to_branch: t,
        ratio,
    })
}

/// Exact check of d_X(x,z) ≤ β·d_X(x,y) for one instance:
/// ‖m‖·max(a_i/m_i) ≤ (‖m‖/(2 m_min))·2·sqrt(Σ a_i²) reduces to the
/// integer inequality (a_k·m_min)² ≤ m_k²·Σ a_i² at the maximizing k.
pub fn branching_bound_exact(arms: &[u64], eta: &RegularDirection) -> bool {
    let m_min = *eta.speeds.iter().min().unwrap() as u128;
    let sum_sq: u128 = arms.iter().map(|&a| (a as u128) * (a as u128)).sum();
    arms.iter().zip(&eta.speeds).all(|(&a, &m)| {
        let lhs = (a as u128) * (a as u128) * m_min * m_min;
        let rhs = (m as u128) * (m as u128) * sum_sq;
        lhs <= rhs
    })
}

/// All vertices of T_q within distance r of the root.
pub fn tree_ball(q: u8, r: usize) -> Vec<TreeVertex> {
    let mut out = vec![TreeVertex::root()];
    let mut frontier = vec![TreeVertex::root()];
    for _ in 0..r {
        let mut next = Vec::new();
        for v in &frontier {
            for c in 0..q {
                if v.word.last() != Some(&c) {
                    next.push(v.child(c));
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// The constructed union-of-flats path.
#[derive(Clone, Debug, Serialize)]
pub struct FlatsPath {
    /// Chart coordinates (per factor, toward each factor's plus end) of
    /// the successive path corners: x, x′, y.
    pub corners: Vec<Vec<f64>>,
    pub length: f64,
    pub d_xy: f64,
    pub ratio: f64,
}

/// Path from x ∈ F₁ to y ∈ F₂ inside F₁ ∪ F₂, where the apartments share
/// a boundary chamber (the per-factor plus ends agree): flow x toward the
/// interior direction η until every coordinate enters the shared ray, then
/// run the straight segment inside F₂. Asserting length ≤ (2β+2)·d_X(x,y)
/// is the caller's check; the measured values are returned.
pub fn union_of_flats_path(
    f1: &ApartmentT,
    f2: &ApartmentT,
    x: &[TreeVertex],
    y: &[TreeVertex],
    eta: &RegularDirection,
) -> Result<FlatsPath, Error> {
    let n = f1.lines.len();
    if f2.lines.len() != n || x.len() != n || y.len() != n || eta.ends.len() != n {
        return Err(Error::ConfigError("rank mismatch".into()));
    }
    for i in 0..n {
        if !f1.lines[i].1.same_end(&f2.lines[i].1) || !eta.ends[i].same_end(&f1.lines[i].1) {
            return Err(Error::NoSharedChamber);
        }
        if !f1.line_contains(i, &x[i]) {
            return Err(Error::ConfigError(format!("x_{i} is not on F1's line")));
        }
        if !f2.line_contains(i, &y[i]) {
            return Err(Error::ConfigError(format!("y_{i} is not on F2's line")));
        }
    }

    let norm = (eta.norm_sq() as f64).sqrt();
    let mut alpha = Vec::with_capacity(n); // x coordinates in F1 chart
    let mut beta_c = Vec::with_capacity(n); // y coordinates in F2 chart
    let mut shared_from = Vec::with_capacity(n); // first shared coordinate
    for i in 0..n {
        alpha.push(f1.line_coordinate(i, &x[i]) as f64);
        beta_c.push(f2.line_coordinate(i, &y[i]) as f64);
        let c = if f1.lines[i].0.same_end(&f2.lines[i].0) {
            f64::NEG_INFINITY
        } else {
            divergence_len(&f1.lines[i].0, &f1.lines[i].1)
                .max(divergence_len(&f2.lines[i].0, &f2.lines[i].1)) as f64
        };
        shared_from.push(c);
    }

    // Flow time until every factor coordinate reaches the shared ray.
    let tau = (0..n)
        .map(|i| {
            let need = (shared_from[i] - alpha[i]).max(0.0);
            need * norm / eta.speeds[i] as f64
        })
        .fold(0.0f64, f64::max);
    let xprime: Vec<f64> = (0..n)
        .map(|i| alpha[i] + eta.speeds[i] as f64 / norm * tau)
        .collect();
    let leg2 = (0..n)
        .map(|i| (xprime[i] - beta_c[i]).powi(2))
        .sum::<f64>()
        .sqrt();
    let length = tau + leg2;
    let d_xy = product_distance_l2(x, y);
    let ratio = if d_xy == 0.0 {
        if length > 1e-12 {
            return Err(Error::Internal("positive length for equal points".into()));
        }
        0.0
    } else {
        length / d_xy
    };
    Ok(FlatsPath {
        corners: vec![alpha, xprime, beta_c],
        length,
        d_xy,
        ratio,
    })
}
