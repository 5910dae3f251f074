//! A desk-scale model of the Bruhat–Tits building of SL₃(ℚ_p): vertices
//! are homothety classes of ℤ_p-lattices in ℚ_p³, kept in a canonical
//! column Hermite form over the localization ℤ_(p); adjacency, balls,
//! the standard apartment, the projections π₁, π₂ onto SL₂-trees, and the
//! marked subcomplex X_Δ of apartments containing the chosen boundary
//! hull Δ.

use crate::exact::{q, qi, QMat, QVec, Q};
use crate::Error;
use num_traits::{Signed, Zero};
use serde::Serialize;
use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

const VAL_INF: i64 = i64::MAX / 4;

/// p-adic valuation of an exact rational.
pub fn val_p(x: Q, p: i64) -> i64 {
    if x.is_zero() {
        return VAL_INF;
    }
    let mut v = 0i64;
    let mut n = x.numer().abs();
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    let mut d = x.denom().abs();
    while d % p == 0 {
        d /= p;
        v -= 1;
    }
    v
}

fn p_pow(p: i64, e: i64) -> Q {
    if e >= 0 {
        Q::from_integer(p.pow(e as u32))
    } else {
        q(1, p.pow((-e) as u32))
    }
}

/// Inverse of the odd (unit) residue d modulo the p-power m, via
/// d^(φ(m)−1) square-and-multiply.
fn inv_mod_p_pow(d: i64, p: i64, m: i64) -> i64 {
    let mut inv = 1i64;
    let mut base = d.rem_euclid(m);
    let phi = m - m / p;
    let mut e = phi - 1;
    while e > 0 {
        if e & 1 == 1 {
            inv = inv * base % m;
        }
        base = base * base % m;
        e >>= 1;
    }
    inv
}

/// Canonical representative of the class x + p^a·ℤ_(p) for any a ∈ ℤ:
/// r = p^a · t / p^m with t ∈ [0, p^m), where p^m is the p-part of the
/// denominator of x/p^a. Agrees with the integer residue in [0, p^a)
/// when x ∈ ℤ_(p) and a ≥ 0.
fn reduce_mod_p_pow(x: Q, p: i64, a: i64) -> Q {
    let y = x * p_pow(p, -a);
    let v = val_p(y, p);
    if v >= 0 {
        return Q::zero();
    }
    let pm = p.pow((-v) as u32);
    // y = n / (d·p^m) with d odd; class mod ℤ_(p) is n·d⁻¹ mod p^m.
    let n = *y.numer();
    let d = y.denom() / pm;
    let t = (n.rem_euclid(pm) * inv_mod_p_pow(d, p, pm)).rem_euclid(pm);
    p_pow(p, a) * q(t, pm)
}

/// A homothety class of ℤ_p-lattices in canonical form: upper triangular
/// integer matrix with p-power diagonal, above-pivot entries reduced
/// modulo the p-power of their row, minimum entry valuation 0.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Serialize)]
pub struct LatticeClass {
    pub h: Vec<Vec<i64>>,
    pub p: i64,
}

impl LatticeClass {
    pub fn dim(&self) -> usize {
        self.h.len()
    }

    /// v_p(det) of the canonical representative.
    pub fn det_val(&self) -> i64 {
        (0..self.dim())
            .map(|i| val_p(Q::from_integer(self.h[i][i]), self.p))
            .sum()
    }

    /// Vertex type = v_p(det) mod dim.
    pub fn vertex_type(&self) -> i64 {
        self.det_val().rem_euclid(self.dim() as i64)
    }

    pub fn to_qmat(&self) -> QMat {
        let n = self.dim();
        let mut m = QMat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = Q::from_integer(self.h[i][j]);
            }
        }
        m
    }
}

/// Multiply a column by a unit of ℤ_(p) (an odd rational for p = 2) so
/// that every entry is an integer times a p-power and the common odd
/// factor is removed. Keeps intermediate rationals small.
fn normalize_unit(col: &QVec, p: i64) -> QVec {
    let odd_part = |mut x: i64| {
        x = x.abs();
        while x > 0 && x % p == 0 {
            x /= p;
        }
        x
    };
    let mut l = 1i64;
    for e in &col.0 {
        if !e.is_zero() {
            l = num_integer::lcm(l, odd_part(*e.denom()));
        }
    }
    let mut g = 0i64;
    for e in &col.0 {
        if !e.is_zero() {
            let scaled = *e * Q::from_integer(l);
            g = num_integer::gcd(g, odd_part(*scaled.numer()));
        }
    }
    if g == 0 {
        g = 1;
    }
    col.scale(q(l, g))
}

/// Column Hermite normal form over ℤ_(p) of a spanning set (columns),
/// without the homothety normalization. Errors when the columns do not
/// span ℚ^n.
fn hnf_p(cols: &[QVec], n: usize, p: i64) -> Result<QMat, Error> {
    let mut remaining: Vec<QVec> = cols
        .iter()
        .filter(|c| !c.is_zero())
        .map(|c| normalize_unit(c, p))
        .collect();
    let mut placed: Vec<Option<QVec>> = vec![None; n];
    for i in (0..n).rev() {
        // Pivot: remaining column with minimal valuation in row i.
        let mut best: Option<(usize, i64)> = None;
        for (j, c) in remaining.iter().enumerate() {
            let v = val_p(c.0[i], p);
            if v < VAL_INF && best.is_none_or(|(_, bv)| v < bv) {
                best = Some((j, v));
            }
        }
        let (j, v) = best.ok_or(Error::SingularBasis)?;
        let mut pivot = remaining.swap_remove(j);
        let unit = p_pow(p, v) / pivot.0[i];
        pivot = pivot.scale(unit);
        for c in remaining.iter_mut() {
            if !c.0[i].is_zero() {
                let f = c.0[i] / p_pow(p, v);
                *c = &*c - &pivot.scale(f);
                if !c.is_zero() {
                    *c = normalize_unit(c, p);
                }
            }
        }
        placed[i] = Some(pivot);
    }
    let mut m = QMat::zeros(n, n);
    for (jcol, col) in placed.into_iter().enumerate() {
        let col = col.unwrap();
        for i in 0..n {
            m[(i, jcol)] = col.0[i];
        }
    }
    // Reduce above-diagonal entries modulo the row pivots.
    for jcol in 1..n {
        for i in (0..jcol).rev() {
            let a_i = val_p(m[(i, i)], p);
            let r = reduce_mod_p_pow(m[(i, jcol)], p, a_i);
            let f = (m[(i, jcol)] - r) / m[(i, i)];
            if !f.is_zero() {
                for k in 0..=i {
                    let delta = f * m[(k, i)];
                    m[(k, jcol)] -= delta;
                }
            }
        }
    }
    Ok(m)
}

/// Canonicalize a spanning set of columns into a lattice class (homothety
/// quotiented out by scaling the minimal entry valuation to 0).
pub fn canonicalize(cols: &[QVec], n: usize, p: i64) -> Result<LatticeClass, Error> {
    let m = hnf_p(cols, n, p)?;
    let min_val = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| val_p(m[(i, j)], p))
        .min()
        .unwrap();
    let scale = p_pow(p, -min_val);
    let mut h = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in 0..n {
            let x = m[(i, j)] * scale;
            debug_assert!(x.is_integer(), "non-integer canonical entry");
            h[i][j] = x.to_integer();
        }
    }
    Ok(LatticeClass { h, p })
}

/// Canonicalize a 3×3 rational basis matrix.
pub fn canonicalize_matrix(basis: &QMat, p: i64) -> Result<LatticeClass, Error> {
    let n = basis.rows;
    let cols: Vec<QVec> = (0..basis.cols).map(|j| basis.col(j)).collect();
    canonicalize(&cols, n, p)
}

/// The class of span(p^a e₁, p^b e₂, p^c e₃) in the standard apartment.
pub fn apartment_vertex(a: i64, b: i64, c: i64, p: i64) -> LatticeClass {
    let cols = vec![
        QVec(vec![p_pow(p, a), qi(0), qi(0)]),
        QVec(vec![qi(0), p_pow(p, b), qi(0)]),
        QVec(vec![qi(0), qi(0), p_pow(p, c)]),
    ];
    canonicalize(&cols, 3, p).expect("diagonal basis is never singular")
}

/// Graph distance between two standard-apartment vertices: with exponent
/// difference δ, d = max_i δ_i − min_i δ_i.
pub fn apartment_graph_distance(u: (i64, i64, i64), v: (i64, i64, i64)) -> i64 {
    let d = [u.0 - v.0, u.1 - v.1, u.2 - v.2];
    d.iter().max().unwrap() - d.iter().min().unwrap()
}

/// All nonzero subspace representatives of F_p^n: for each dimension k,
/// a list of bases (vectors with entries in 0..p).
fn subspaces_fp3(p: i64) -> Vec<Vec<[i64; 3]>> {
    let mut out = Vec::new();
    // Lines: canonical projective representatives (first nonzero = 1).
    let mut lines = Vec::new();
    for a in 0..p {
        for b in 0..p {
            for c in 0..p {
                let v = [a, b, c];
                if v == [0, 0, 0] {
                    continue;
                }
                let first = v.iter().find(|x| **x != 0).unwrap();
                if *first == 1 {
                    lines.push(v);
                }
            }
        }
    }
    for l in &lines {
        out.push(vec![*l]);
    }
    // Planes: kernels of the canonical dual lines.
    for phi in &lines {
        let j = phi.iter().position(|x| *x != 0).unwrap();
        let mut basis = Vec::new();
        for k in 0..3 {
            if k == j {
                continue;
            }
            // e_k − phi_k·e_j (phi_j = 1)
            let mut v = [0i64; 3];
            v[k] = 1;
            v[j] = (-phi[k]).rem_euclid(p);
            basis.push(v);
        }
        out.push(basis);
    }
    out
}

/// The 2(p²+p+1) neighbors of a lattice class: classes of M with
/// pL ⊂ M ⊂ L and M/pL a line or a plane of L/pL.
pub fn neighbors(l: &LatticeClass) -> Vec<LatticeClass> {
    let p = l.p;
    let h = l.to_qmat();
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for basis in subspaces_fp3(p) {
        let mut cols: Vec<QVec> = basis
            .iter()
            .map(|v| {
                let vv = QVec(vec![
                    Q::from_integer(v[0]),
                    Q::from_integer(v[1]),
                    Q::from_integer(v[2]),
                ]);
                h.mul_vec(&vv)
            })
            .collect();
        for j in 0..3 {
            cols.push(h.col(j).scale(Q::from_integer(p)));
        }
        let m = canonicalize(&cols, 3, p).expect("sublattice of full rank");
        if m != *l && seen.insert(m.clone()) {
            out.push(m);
        }
    }
    out.sort();
    out
}

/// A ball in the building's 1-skeleton.
#[derive(Clone, Debug)]
pub struct BuildingBall {
    pub p: i64,
    pub radius: usize,
    /// BFS order from the center; index 0 is the center.
    pub vertices: Vec<LatticeClass>,
    pub index: HashMap<LatticeClass, usize>,
    /// Adjacency lists by index (within the ball).
    pub adj: Vec<Vec<usize>>,
    /// BFS depth of each vertex.
    pub depth: Vec<usize>,
}

pub fn build_ball(p: i64, radius: usize) -> Result<BuildingBall, Error> {
    if radius > 4 {
        return Err(Error::RadiusTooLarge(radius));
    }
    let base = apartment_vertex(0, 0, 0, p);
    let mut vertices = vec![base.clone()];
    let mut index = HashMap::new();
    index.insert(base, 0usize);
    let mut depth = vec![0usize];
    let mut adj: Vec<Vec<usize>> = vec![Vec::new()];
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        if depth[i] == radius {
            continue;
        }
        for nb in neighbors(&vertices[i].clone()) {
            let j = match index.get(&nb) {
                Some(&j) => j,
                None => {
                    let j = vertices.len();
                    vertices.push(nb.clone());
                    index.insert(nb, j);
                    depth.push(depth[i] + 1);
                    adj.push(Vec::new());
                    queue.push_back(j);
                    j
                }
            };
            if !adj[i].contains(&j) {
                adj[i].push(j);
                adj[j].push(i);
            }
        }
    }
    Ok(BuildingBall {
        p,
        radius,
        vertices,
        index,
        adj,
        depth,
    })
}

impl BuildingBall {
    /// Graph distances from a source, restricted to an optional vertex
    /// filter (None = ambient ball).
    pub fn bfs_distances(&self, from: usize, filter: Option<&[bool]>) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.vertices.len()];
        if let Some(f) = filter {
            if !f[from] {
                return dist;
            }
        }
        dist[from] = Some(0);
        let mut queue = VecDeque::from([from]);
        while let Some(i) = queue.pop_front() {
            for &j in &self.adj[i] {
                if dist[j].is_none() && filter.is_none_or(|f| f[j]) {
                    dist[j] = Some(dist[i].unwrap() + 1);
                    queue.push_back(j);
                }
            }
        }
        dist
    }
}

/// A vertex of the SL₂(ℚ_p) tree (2-dimensional lattice class).
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Serialize)]
pub struct TreeClass {
    pub h: Vec<Vec<i64>>,
    pub p: i64,
}

fn canonicalize2(cols: &[QVec], p: i64) -> Result<TreeClass, Error> {
    let l = canonicalize(cols, 2, p)?;
    Ok(TreeClass { h: l.h, p })
}

/// Tree distance between two classes: for M⁻¹N with elementary divisors
/// p^{v₁} ≥ p^{v₂}, d = v₁ − v₂ = v_p(det) − 2·min entry valuation.
pub fn tree2_distance(a: &TreeClass, b: &TreeClass) -> i64 {
    let p = a.p;
    let to_q = |t: &TreeClass| {
        let mut m = QMat::zeros(2, 2);
        for i in 0..2 {
            for j in 0..2 {
                m[(i, j)] = Q::from_integer(t.h[i][j]);
            }
        }
        m
    };
    let ma = to_q(a);
    let mb = to_q(b);
    let m = ma.inverse().expect("canonical basis invertible").mul(&mb);
    let vdet = val_p(m.det(), p);
    let vmin = (0..2)
        .flat_map(|i| (0..2).map(move |j| (i, j)))
        .map(|(i, j)| val_p(m[(i, j)], p))
        .min()
        .unwrap();
    vdet - 2 * vmin
}

/// π_i by the quotient formula: the image of L in ℚ_p³/D_i, where
/// D₁ = span(e₂) and D₂ = span(e₁); coordinates (e₁,e₃) resp. (e₂,e₃).
pub fn projection_pi(i: usize, l: &LatticeClass) -> TreeClass {
    let drop_row = match i {
        1 => 1, // quotient by span(e₂)
        2 => 0, // quotient by span(e₁)
        _ => panic!("projection index must be 1 or 2"),
    };
    let rows: [usize; 2] = match drop_row {
        1 => [0, 2],
        _ => [1, 2],
    };
    let cols: Vec<QVec> = (0..3)
        .map(|jcol| {
            QVec(vec![
                Q::from_integer(l.h[rows[0]][jcol]),
                Q::from_integer(l.h[rows[1]][jcol]),
            ])
        })
        .collect();
    canonicalize2(&cols, l.p).expect("projected lattice has full rank")
}

/// Generator valuation of L ∩ span(e_axis): the minimal k with
/// p^k e_axis ∈ L.
pub fn line_intersection_val(l: &LatticeClass, axis: usize) -> i64 {
    let h = l.to_qmat();
    let inv = h.inverse().expect("canonical basis invertible");
    let e = {
        let mut v = QVec::zeros(3);
        v.0[axis] = qi(1);
        v
    };
    let w = inv.mul_vec(&e);
    -(0..3).map(|i| val_p(w.0[i], l.p)).min().unwrap()
}

/// Basis (in the plane's own 2 coordinates) of L ∩ span(e_a, e_b), where
/// the dropped axis is the remaining coordinate.
fn plane_intersection(l: &LatticeClass, keep: [usize; 2]) -> Vec<QVec> {
    let p = l.p;
    let drop = 3 - keep[0] - keep[1];
    let h = l.to_qmat();
    let r: Vec<Q> = (0..3).map(|j| h[(drop, j)]).collect();
    let jstar = (0..3)
        .min_by_key(|&j| val_p(r[j], p))
        .expect("nonempty row");
    if val_p(r[jstar], p) >= VAL_INF {
        // The whole lattice already lies in the plane (cannot happen for
        // an invertible basis).
        unreachable!("canonical basis has a zero row");
    }
    let mut out = Vec::new();
    for j in 0..3 {
        if j == jstar {
            continue;
        }
        let f = r[j] / r[jstar];
        let col = &h.col(j) - &h.col(jstar).scale(f);
        debug_assert!(col.0[drop].is_zero());
        out.push(QVec(vec![col.0[keep[0]], col.0[keep[1]]]));
    }
    out
}

/// One ray step toward the boundary vertex of the line span(e_axis):
/// L_k = L + p^{−k}(L ∩ D).
fn ray_step(l0_cols: &[QVec], axis: usize, k: i64, gen_val: i64, p: i64) -> Result<LatticeClass, Error> {
    let mut cols = l0_cols.to_vec();
    let mut e = QVec::zeros(3);
    e.0[axis] = p_pow(p, gen_val - k);
    cols.push(e);
    canonicalize(&cols, 3, p)
}

/// Ray-following oracle for π_i: walk [L, η_i) with η₁ the boundary
/// vertex of span(e₂) and η₂ of span(e₁), until the lattice splits as
/// (L_k ∩ D_i) ⊕ (L_k ∩ P_i) — entry into the parallel set — and read
/// off the cross-section component (the plane lattice).
pub fn projection_pi_oracle(i: usize, l: &LatticeClass, max_steps: i64) -> Result<TreeClass, Error> {
    let p = l.p;
    let (axis, keep) = match i {
        1 => (1usize, [0usize, 2usize]),
        2 => (0usize, [1usize, 2usize]),
        _ => panic!("projection index must be 1 or 2"),
    };
    let base_cols: Vec<QVec> = (0..3).map(|j| l.to_qmat().col(j)).collect();
    let gen_val = line_intersection_val(l, axis);
    for k in 0..=max_steps {
        let lk = ray_step(&base_cols, axis, k, gen_val, p)?;
        // Split test: v(L∩D) + v(det of L∩P) = v(det L).
        let v_line = line_intersection_val(&lk, axis);
        let plane = plane_intersection(&lk, keep);
        let plane_h = hnf_p(&plane, 2, p)?;
        let v_plane = val_p(plane_h[(0, 0)], p) + val_p(plane_h[(1, 1)], p);
        if v_line + v_plane == lk.det_val() {
            return canonicalize2(&plane, p);
        }
    }
    Err(Error::NotFound(
        "ray did not enter the parallel set within the step bound".into(),
    ))
}

/// X_Δ membership data for one vertex.
#[derive(Clone, Debug, Serialize)]
pub struct XDeltaMark {
    pub in_x_delta: bool,
    /// Unipotent witness parameters (a, b) with u(a,b)⁻¹·L diagonal,
    /// as exact rationals (num, den), present iff marked.
    pub witness: Option<((i64, i64), (i64, i64))>,
}

/// Decide membership of L in X_Δ (up to the valuation bound on the
/// unipotent parameters): L lies in an apartment whose boundary contains
/// Δ iff L splits against the frame (e₁, e₂, u(a,b)e₃), which happens
/// iff v(L∩e₁) + v(L∩e₂) + v₃ = v(det) for the canonical witness
/// u(a, b) = I + a·E₁₃ + b·E₂₃ read off the Hermite form.
pub fn x_delta_mark(l: &LatticeClass, val_bound: i64) -> XDeltaMark {
    let p = l.p;
    let v1 = line_intersection_val(l, 0);
    let v2 = line_intersection_val(l, 1);
    let v3 = val_p(Q::from_integer(l.h[2][2]), p);
    let split = v1 + v2 + v3 == l.det_val();
    if !split {
        return XDeltaMark {
            in_x_delta: false,
            witness: None,
        };
    }
    let a = Q::from_integer(l.h[0][2]) / Q::from_integer(l.h[2][2]);
    let b = Q::from_integer(l.h[1][2]) / Q::from_integer(l.h[2][2]);
    let within = val_p(a, p) >= -val_bound && val_p(b, p) >= -val_bound;
    XDeltaMark {
        in_x_delta: within,
        witness: within.then(|| ((*a.numer(), *a.denom()), (*b.numer(), *b.denom()))),
    }
}

/// Apply u(a,b)⁻¹ = u(−a,−b) to L and canonicalize.
pub fn unipotent_inverse_apply(l: &LatticeClass, a: Q, b: Q) -> LatticeClass {
    let h = l.to_qmat();
    let cols: Vec<QVec> = (0..3)
        .map(|j| {
            let c = h.col(j);
            QVec(vec![c.0[0] - a * c.0[2], c.0[1] - b * c.0[2], c.0[2]])
        })
        .collect();
    canonicalize(&cols, 3, l.p).expect("unipotent preserves rank")
}

/// The class u(a,b)·Λ(x,y,z).
pub fn unipotent_apartment_vertex(a: Q, b: Q, x: i64, y: i64, z: i64, p: i64) -> LatticeClass {
    let cols = vec![
        QVec(vec![p_pow(p, x), qi(0), qi(0)]),
        QVec(vec![qi(0), p_pow(p, y), qi(0)]),
        QVec(vec![a * p_pow(p, z), b * p_pow(p, z), p_pow(p, z)]),
    ];
    canonicalize(&cols, 3, p).expect("frame basis is never singular")
}

/// A pair of canonical basis matrices serving as a worst-case witness.
pub type WitnessPair = (Vec<Vec<i64>>, Vec<Vec<i64>>);

/// Everything the building certification measures.
#[derive(Clone, Debug, Serialize)]
pub struct BuildingCertificate {
    pub p: i64,
    pub radius: usize,
    pub val_bound: i64,
    pub vertex_count: usize,
    pub marked_count: usize,
    pub base_degree: usize,
    pub injective_on_marked: bool,
    pub ambient_noninjective_witness: Option<WitnessPair>,
    pub pi_lipschitz_ok: bool,
    /// max over marked pairs of d_{X_Δ} / (d₁ + d₂).
    pub max_upper_ratio: f64,
    /// max over marked pairs of (d₁ + d₂) / d_{X_Δ}.
    pub max_lower_ratio: f64,
    pub witness_upper: Option<WitnessPair>,
    pub witness_lower: Option<WitnessPair>,
    /// Step-1 inside F₀ holds with graph-metric constant 1
    /// (Euclidean α = 1/tan(π/3) = 1/√3 at normalization κ = √3).
    pub step1_ok: bool,
    pub alpha_euclidean: f64,
    pub metric_normalization: f64,
}

/// Certify the building embedding data on a marked ball.
pub fn certify_building_embedding(
    ball: &BuildingBall,
    val_bound: i64,
) -> Result<BuildingCertificate, Error> {
    let n = ball.vertices.len();
    let marks: Vec<XDeltaMark> = ball
        .vertices
        .iter()
        .map(|v| x_delta_mark(v, val_bound))
        .collect();
    let marked: Vec<bool> = marks.iter().map(|m| m.in_x_delta).collect();
    let marked_idx: Vec<usize> = (0..n).filter(|&i| marked[i]).collect();

    // Verify every witness exactly: u(−a,−b)·L must be a diagonal class.
    for (i, m) in marks.iter().enumerate() {
        if let Some(((an, ad), (bn, bd))) = m.witness {
            let a = q(an, ad);
            let b = q(bn, bd);
            let d = unipotent_inverse_apply(&ball.vertices[i], a, b);
            let diagonal = (0..3).all(|r| (0..3).all(|c| r == c || d.h[r][c] == 0));
            if !diagonal {
                return Err(Error::PostconditionViolated(format!(
                    "witness for vertex {i} does not diagonalize its class"
                )));
            }
        }
    }

    // Connectivity of the marked subgraph (from the base vertex).
    let from_base = ball.bfs_distances(0, Some(&marked));
    if marked_idx.iter().any(|&i| from_base[i].is_none()) {
        return Err(Error::DisconnectedXDelta(format!(
            "radius {} val_bound {val_bound}",
            ball.radius
        )));
    }

    // Projections of every ball vertex.
    let pi1: Vec<TreeClass> = ball.vertices.iter().map(|v| projection_pi(1, v)).collect();
    let pi2: Vec<TreeClass> = ball.vertices.iter().map(|v| projection_pi(2, v)).collect();

    // (b) 1-Lipschitz on the ambient skeleton.
    let mut pi_lipschitz_ok = true;
    for i in 0..n {
        for &j in &ball.adj[i] {
            if tree2_distance(&pi1[i], &pi1[j]) > 1 || tree2_distance(&pi2[i], &pi2[j]) > 1 {
                pi_lipschitz_ok = false;
            }
        }
    }

    // (a) injectivity of (π₁, π₂) on the marked set; a non-injectivity
    // witness on the ambient ball.
    let mut image: BTreeMap<(TreeClass, TreeClass), usize> = BTreeMap::new();
    let mut injective_on_marked = true;
    let mut ambient_witness = None;
    for i in 0..n {
        let key = (pi1[i].clone(), pi2[i].clone());
        if let Some(&j) = image.get(&key) {
            if marked[i] && marked[j] {
                injective_on_marked = false;
            }
            if ambient_witness.is_none() {
                ambient_witness =
                    Some((ball.vertices[j].h.clone(), ball.vertices[i].h.clone()));
            }
        } else {
            image.insert(key, i);
        }
    }

    // (c) bi-Lipschitz ratios over marked pairs with the X_Δ-internal
    // graph metric.
    let mut max_upper = 0.0f64;
    let mut max_lower = 0.0f64;
    let mut witness_upper = None;
    let mut witness_lower = None;
    for (a, &i) in marked_idx.iter().enumerate() {
        let dist = ball.bfs_distances(i, Some(&marked));
        for &j in marked_idx.iter().skip(a + 1) {
            let dx = dist[j].expect("marked set connected") as f64;
            let dt = (tree2_distance(&pi1[i], &pi1[j]) + tree2_distance(&pi2[i], &pi2[j])) as f64;
            if dt > 0.0 && dx / dt > max_upper {
                max_upper = dx / dt;
                witness_upper = Some((ball.vertices[i].h.clone(), ball.vertices[j].h.clone()));
            }
            if dx > 0.0 && dt / dx > max_lower {
                max_lower = dt / dx;
                witness_lower = Some((ball.vertices[i].h.clone(), ball.vertices[j].h.clone()));
            }
        }
    }

    // (d) Step-1 inside F₀ with the graph metric: d ≤ 1·(d₁+d₂).
    let mut step1_ok = true;
    let r = ball.radius as i64;
    let mut apartment_pts = Vec::new();
    for x in -r..=r {
        for y in -r..=r {
            if apartment_graph_distance((x, y, 0), (0, 0, 0)) <= r {
                apartment_pts.push((x, y, 0i64));
            }
        }
    }
    for &u in &apartment_pts {
        for &v in &apartment_pts {
            let d = apartment_graph_distance(u, v);
            let lu = apartment_vertex(u.0, u.1, u.2, ball.p);
            let lv = apartment_vertex(v.0, v.1, v.2, ball.p);
            let d1 = tree2_distance(&projection_pi(1, &lu), &projection_pi(1, &lv));
            let d2 = tree2_distance(&projection_pi(2, &lu), &projection_pi(2, &lv));
            if d > d1 + d2 {
                step1_ok = false;
            }
        }
    }

    Ok(BuildingCertificate {
        p: ball.p,
        radius: ball.radius,
        val_bound,
        vertex_count: n,
        marked_count: marked_idx.len(),
        base_degree: ball.adj[0].len(),
        injective_on_marked,
        ambient_noninjective_witness: ambient_witness,
        pi_lipschitz_ok,
        max_upper_ratio: max_upper,
        max_lower_ratio: max_lower,
        witness_upper,
        witness_lower,
        step1_ok,
        alpha_euclidean: 1.0 / 3.0f64.sqrt(),
        metric_normalization: 3.0f64.sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn base() -> LatticeClass {
        apartment_vertex(0, 0, 0, 2)
    }

    #[test]
    fn canonical_identity_and_types() {
        let b = base();
        assert_eq!(b.h, vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        assert_eq!(b.vertex_type(), 0);
        let l = apartment_vertex(1, 0, 0, 2);
        assert_eq!(l.vertex_type(), 1);
        // homothety invariance of the class
        assert_eq!(apartment_vertex(3, 2, 2, 2), apartment_vertex(1, 0, 0, 2));
    }

    #[test]
    fn canonicalize_idempotent_and_homothety_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for _ in 0..1000 {
            // Random lattice: random integer matrix with nonzero det.
            let m = loop {
                let mut m = QMat::zeros(3, 3);
                for i in 0..3 {
                    for j in 0..3 {
                        m[(i, j)] = Q::from_integer(rng.gen_range(-8i64..=8));
                    }
                }
                if !m.det().is_zero() {
                    break m;
                }
            };
            let l = canonicalize_matrix(&m, 2).unwrap();
            // Idempotent.
            assert_eq!(canonicalize_matrix(&l.to_qmat(), 2).unwrap(), l);
            // Invariant under a random ℤ_(2)-unimodular column change and
            // a p-scaling.
            // Product of integer shears and an odd diagonal unit: a
            // genuine element of GL₃(ℤ_(2)).
            let mut e1 = QMat::identity(3);
            e1[(0, 1)] = Q::from_integer(rng.gen_range(-4i64..=4));
            let mut e2 = QMat::identity(3);
            e2[(1, 2)] = Q::from_integer(rng.gen_range(-4i64..=4));
            let mut e3 = QMat::identity(3);
            e3[(2, 0)] = Q::from_integer(rng.gen_range(-4i64..=4));
            let mut d = QMat::identity(3);
            d[(1, 1)] = Q::from_integer(2 * rng.gen_range(0i64..=2) + 1); // odd unit
            let u = e1.mul(&e2).mul(&e3).mul(&d);
            let changed = m.mul(&u);
            let mut scaled = changed.clone();
            let s = p_pow(2, rng.gen_range(-2i64..=2));
            for i in 0..3 {
                for j in 0..3 {
                    scaled[(i, j)] *= s;
                }
            }
            assert_eq!(canonicalize_matrix(&scaled, 2).unwrap(), l);
        }
    }

    #[test]
    fn singular_basis_rejected() {
        let mut m = QMat::zeros(3, 3);
        m[(0, 0)] = qi(1);
        m[(1, 1)] = qi(1);
        assert!(matches!(
            canonicalize_matrix(&m, 2),
            Err(Error::SingularBasis)
        ));
    }

    #[test]
    fn base_has_fourteen_neighbors() {
        let nb = neighbors(&base());
        assert_eq!(nb.len(), 14);
        for m in &nb {
            assert_ne!(m.vertex_type(), 0); // type changes along edges
            // symmetry: L is a neighbor of each of its neighbors
            assert!(neighbors(m).contains(&base()));
        }
    }

    #[test]
    fn neighbor_count_p3() {
        let b3 = apartment_vertex(0, 0, 0, 3);
        assert_eq!(neighbors(&b3).len(), 2 * (9 + 3 + 1));
    }

    #[test]
    fn ball_sizes_and_types() {
        let b0 = build_ball(2, 0).unwrap();
        assert_eq!(b0.vertices.len(), 1);
        let b1 = build_ball(2, 1).unwrap();
        assert_eq!(b1.vertices.len(), 15);
        assert!(build_ball(2, 5).is_err());
        // Types partition into 3 classes on the radius-2 ball.
        let b2 = build_ball(2, 2).unwrap();
        let mut counts = [0usize; 3];
        for v in &b2.vertices {
            counts[v.vertex_type() as usize] += 1;
        }
        assert!(counts.iter().all(|&c| c > 0));
        // Deterministic BFS: rebuilt ball is identical.
        let again = build_ball(2, 2).unwrap();
        assert_eq!(b2.vertices, again.vertices);
        assert_eq!(b2.adj, again.adj);
    }

    #[test]
    fn apartment_vertices_distinct_and_adjacent() {
        // Distinct exponents mod shift give distinct classes.
        let mut seen = HashSet::new();
        for x in -2i64..=2 {
            for y in -2i64..=2 {
                assert!(seen.insert(apartment_vertex(x, y, 0, 2)));
            }
        }
        // Apartment neighbors at graph distance 1 are skeleton neighbors.
        let l = apartment_vertex(0, 0, 0, 2);
        let m = apartment_vertex(1, 0, 0, 2);
        assert!(neighbors(&l).contains(&m));
        let far = apartment_vertex(2, 0, 0, 2);
        assert!(!neighbors(&l).contains(&far));
    }

    #[test]
    fn projection_examples() {
        let b = base();
        let t = projection_pi(1, &b);
        assert_eq!(t.h, vec![vec![1, 0], vec![0, 1]]);
        // π₂ of span(e₁, p e₂, e₃): elementary divisors (p,1) in quotient.
        let l = apartment_vertex(0, 1, 0, 2);
        let t2 = projection_pi(2, &l);
        let base2 = projection_pi(2, &b);
        assert_eq!(tree2_distance(&t2, &base2), 1);
        // π₁ depends only on (a, c).
        for a in -2i64..=2 {
            for c in -2i64..=2 {
                let p0 = projection_pi(1, &apartment_vertex(a, 0, c, 2));
                for bb in -2i64..=2 {
                    assert_eq!(projection_pi(1, &apartment_vertex(a, bb, c, 2)), p0);
                }
            }
        }
    }

    #[test]
    fn quotient_formula_equals_ray_oracle() {
        let ball = build_ball(2, 2).unwrap();
        for v in &ball.vertices {
            for i in [1, 2] {
                let direct = projection_pi(i, v);
                let oracle = projection_pi_oracle(i, v, 10).unwrap();
                assert_eq!(direct.h, oracle.h, "vertex {:?} pi_{i}", v.h);
            }
        }
    }

    #[test]
    fn tree_distance_examples() {
        let b = projection_pi(1, &base());
        assert_eq!(tree2_distance(&b, &b), 0);
        let l = projection_pi(1, &apartment_vertex(2, 0, 0, 2));
        assert_eq!(tree2_distance(&b, &l), 2);
    }

    #[test]
    fn x_delta_marks_and_witnesses() {
        // Every apartment vertex is marked with witness (0,0).
        for x in -2i64..=2 {
            for y in -2i64..=2 {
                let m = x_delta_mark(&apartment_vertex(x, y, 0, 2), 3);
                assert!(m.in_x_delta);
                assert_eq!(m.witness, Some(((0, 1), (0, 1))));
            }
        }
        // A genuinely unipotent-translated vertex is marked with the
        // right witness.
        let u = unipotent_apartment_vertex(q(1, 2), qi(0), 1, 0, -1, 2);
        let m = x_delta_mark(&u, 3);
        assert!(m.in_x_delta);
        // ...and the witness diagonalizes it.
        let ((an, ad), (bn, bd)) = m.witness.unwrap();
        let d = unipotent_inverse_apply(&u, q(an, ad), q(bn, bd));
        assert!((0..3).all(|r| (0..3).all(|c| r == c || d.h[r][c] == 0)));
        // Witness outside the valuation bound is rejected.
        let deep = unipotent_apartment_vertex(q(1, 16), qi(0), 4, 0, -4, 2);
        assert!(!x_delta_mark(&deep, 3).in_x_delta);
        assert!(x_delta_mark(&deep, 4).in_x_delta);
    }

    #[test]
    fn enumerated_x_delta_classes_are_marked() {
        // Constructive cross-check: unipotent orbit points must pass the
        // split test.
        for num in 0..8i64 {
            for den_pow in 0..=2i64 {
                let a = q(num, 1 << den_pow as u32);
                for x in -2i64..=2 {
                    let l = unipotent_apartment_vertex(a, q(num, 2), x, 0, -x, 2);
                    assert!(x_delta_mark(&l, 3).in_x_delta);
                }
            }
        }
    }

    #[test]
    fn certify_radius_two() {
        let ball = build_ball(2, 2).unwrap();
        let cert = certify_building_embedding(&ball, 2).unwrap();
        assert_eq!(cert.base_degree, 14);
        assert!(cert.injective_on_marked);
        assert!(cert.pi_lipschitz_ok);
        assert!(cert.step1_ok);
        assert!(cert.marked_count > 0 && cert.marked_count < cert.vertex_count);
        assert!(cert.ambient_noninjective_witness.is_some());
        assert!(cert.max_upper_ratio >= 1.0);
        assert!(cert.max_lower_ratio >= 1.0);
    }
}
