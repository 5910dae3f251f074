//! Spherical Coxeter complexes: the Weyl group, its walls and vertices,
//! and the search for maximally distributed vertex tuples together with
//! the derived data (walls s_i, interior points η_i, the hull Δ, and the
//! angles θ_i).

use crate::exact::{in_nonneg_cone, qi, QMat, QVec, Q};
use crate::root_systems::{Root, RootSystem};
use crate::Error;
use num_traits::{Signed, ToPrimitive, Zero};
use std::collections::{BTreeSet, HashSet};

/// A finite Weyl group given by its reflection matrices in the ambient
/// realization of the root system.
#[derive(Clone, Debug)]
pub struct WeylGroup {
    pub generators: Vec<QMat>,
    pub elements: Vec<QMat>,
}

/// Reflection in the hyperplane orthogonal to `alpha`:
/// x ↦ x − 2(x,α)/(α,α)·α, as an exact rational matrix.
pub fn reflection_matrix(alpha: &QVec) -> QMat {
    let n = alpha.len();
    let norm = alpha.dot(alpha);
    let mut m = QMat::identity(n);
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] -= qi(2) * alpha.0[i] * alpha.0[j] / norm;
        }
    }
    m
}

/// Enumerate the full Weyl group by closing the simple reflections under
/// multiplication.
pub fn generate_weyl_group(rs: &RootSystem) -> Result<WeylGroup, Error> {
    let rank = rs.rank();
    if rank > 6 {
        return Err(Error::RankTooLarge(rank));
    }
    let generators: Vec<QMat> = rs
        .simple_roots
        .iter()
        .map(|r| reflection_matrix(&r.ambient))
        .collect();
    let dim = rs.simple_roots[0].ambient.len();
    let mut seen: HashSet<Vec<(i64, i64)>> = HashSet::new();
    let mut elements = vec![QMat::identity(dim)];
    seen.insert(elements[0].key());
    let mut frontier = elements.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for w in &frontier {
            for g in &generators {
                let wg = g.mul(w);
                if seen.insert(wg.key()) {
                    next.push(wg.clone());
                    elements.push(wg);
                }
            }
        }
        frontier = next;
    }
    let expected = rs.cartan_type.weyl_order();
    if elements.len() as u64 != expected {
        return Err(Error::Internal(format!(
            "Weyl group order for {}: got {}, expected {expected}",
            rs.cartan_type.name(),
            elements.len()
        )));
    }
    Ok(WeylGroup {
        generators,
        elements,
    })
}

/// A wall of the sphere, named by its normal direction: the canonical
/// representative is a positive root.
#[derive(Clone, Debug, PartialEq)]
pub struct Wall {
    pub normal: Root,
}

/// A vertex of the spherical Coxeter complex: a W-image of an extreme ray
/// of the closed fundamental chamber. The direction is stored ray-canonically
/// (exact rationals, positive scaling quotiented out); `orbit_type` records
/// which fundamental coweight the vertex is an image of.
#[derive(Clone, Debug, PartialEq)]
pub struct SphericalVertex {
    pub direction: QVec,
    pub orbit_type: usize,
}

fn vec_key(v: &QVec) -> Vec<(i64, i64)> {
    v.0.iter().map(|x| (*x.numer(), *x.denom())).collect()
}

/// Fundamental coweights: the dual basis (inside the span of the roots)
/// to the simple roots, ω_i with (α_k, ω_i) = δ_{ki}.
pub fn fundamental_coweights(rs: &RootSystem) -> Result<Vec<QVec>, Error> {
    let n = rs.rank();
    let gram = {
        let mut g = QMat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                g[(i, j)] = rs.simple_roots[i].ambient.dot(&rs.simple_roots[j].ambient);
            }
        }
        g
    };
    let ginv = gram.inverse().ok_or(Error::SingularBasis)?;
    Ok((0..n)
        .map(|i| {
            let mut w = QVec::zeros(rs.simple_roots[0].ambient.len());
            for j in 0..n {
                w = &w + &rs.simple_roots[j].ambient.scale(ginv[(j, i)]);
            }
            w
        })
        .collect())
}

/// All vertices of the complex, in canonical order (orbit type, then
/// lexicographic on the ray-canonical direction).
pub fn vertex_set(rs: &RootSystem, w: &WeylGroup) -> Result<Vec<SphericalVertex>, Error> {
    let coweights = fundamental_coweights(rs)?;
    let mut out: Vec<SphericalVertex> = Vec::new();
    let mut seen: HashSet<Vec<(i64, i64)>> = HashSet::new();
    for (t, omega) in coweights.iter().enumerate() {
        for g in &w.elements {
            let dir = g.mul_vec(omega).ray_canonical();
            if seen.insert(vec_key(&dir)) {
                out.push(SphericalVertex {
                    direction: dir,
                    orbit_type: t,
                });
            }
        }
    }
    out.sort_by(|a, b| {
        a.orbit_type
            .cmp(&b.orbit_type)
            .then_with(|| vec_key(&a.direction).cmp(&vec_key(&b.direction)))
    });
    Ok(out)
}

/// The walls whose hyperplanes contain every vertex of `vs`.
pub fn walls_containing(vs: &[SphericalVertex], rs: &RootSystem) -> Vec<Wall> {
    rs.positive_roots
        .iter()
        .filter(|alpha| vs.iter().all(|v| alpha.ambient.dot(&v.direction).is_zero()))
        .map(|alpha| Wall {
            normal: alpha.clone(),
        })
        .collect()
}

/// True iff exactly one wall's hyperplane contains every vertex of `vs`,
/// i.e. the smallest singular sphere containing `vs` is a wall.
pub fn spans_wall(vs: &[SphericalVertex], rs: &RootSystem) -> bool {
    !vs.is_empty() && walls_containing(vs, rs).len() == 1
}

/// The maximally distributed predicate of a rank-sized vertex tuple:
/// (i) no two vertices are antipodal and no single wall contains all of
/// them; (ii) every (n−1)-subset spans a wall; (iii) no wall hyperplane
/// strictly separates: whenever the pairings (α, ξ_i) all have the same
/// weak sign, at most one is nonzero.
pub fn is_maximally_distributed(
    vs: &[SphericalVertex],
    rs: &RootSystem,
) -> Result<bool, Error> {
    let n = rs.rank();
    if vs.len() != n {
        return Err(Error::WrongCardinality {
            expected: n,
            got: vs.len(),
        });
    }
    // (i) not pairwise opposite, nor all contained in one wall.
    for i in 0..n {
        for j in (i + 1)..n {
            let neg = (-&vs[j].direction).ray_canonical();
            if vs[i].direction == neg {
                return Ok(false);
            }
        }
    }
    if !walls_containing(vs, rs).is_empty() {
        return Ok(false);
    }
    // (ii) every (n−1)-subset spans a wall.
    if n >= 2 {
        for i in 0..n {
            let subset: Vec<SphericalVertex> = (0..n)
                .filter(|&j| j != i)
                .map(|j| vs[j].clone())
                .collect();
            if !spans_wall(&subset, rs) {
                return Ok(false);
            }
        }
    }
    // (iii) weak hemisphere condition at every wall.
    for alpha in &rs.positive_roots {
        let vals: Vec<Q> = vs.iter().map(|v| alpha.ambient.dot(&v.direction)).collect();
        let all_nonneg = vals.iter().all(|x| !x.is_negative());
        let all_nonpos = vals.iter().all(|x| !x.is_positive());
        if (all_nonneg || all_nonpos) && vals.iter().filter(|x| !x.is_zero()).count() > 1 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A maximally distributed configuration together with its derived data.
#[derive(Clone, Debug)]
pub struct MaxDistConfig {
    pub vertices: Vec<SphericalVertex>,
    /// s_i = the unique wall spanned by {ξ_j}_{j≠i}.
    pub walls: Vec<Wall>,
    /// η_i = barycenter of {ξ_j}_{j≠i}, ray-canonical.
    pub etas: Vec<QVec>,
    /// Δ = Hull(ξ_1,…,ξ_n), as the chambers it contains; each chamber is
    /// given by its extreme-ray vertex directions in canonical order.
    pub delta_chambers: Vec<Vec<QVec>>,
}

fn combinations<T: Clone>(items: &[T], k: usize) -> Vec<Vec<T>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    if k == 0 || k > items.len() {
        return out;
    }
    loop {
        out.push(idx.iter().map(|&i| items[i].clone()).collect());
        // advance
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + items.len() - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        idx[i] += 1;
        for j in (i + 1)..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// All chambers of the complex, each as its sorted set of extreme-ray
/// vertex directions (the W-images of the fundamental coweights).
pub fn chambers(rs: &RootSystem, w: &WeylGroup) -> Result<Vec<Vec<QVec>>, Error> {
    let coweights = fundamental_coweights(rs)?;
    let mut seen: BTreeSet<Vec<Vec<(i64, i64)>>> = BTreeSet::new();
    let mut out = Vec::new();
    for g in &w.elements {
        let mut rays: Vec<QVec> = coweights
            .iter()
            .map(|om| g.mul_vec(om).ray_canonical())
            .collect();
        rays.sort_by_key(vec_key);
        let key: Vec<Vec<(i64, i64)>> = rays.iter().map(vec_key).collect();
        if seen.insert(key) {
            out.push(rays);
        }
    }
    Ok(out)
}

/// Exhaustively search the vertex tuples in canonical order and return the
/// first maximally distributed one, with walls, etas, and Δ filled in.
pub fn find_maximally_distributed(
    rs: &RootSystem,
    w: &WeylGroup,
) -> Result<MaxDistConfig, Error> {
    let n = rs.rank();
    if n > 4 {
        return Err(Error::RankTooLarge(n));
    }
    let verts = vertex_set(rs, w)?;
    for tuple in combinations(&verts, n) {
        if is_maximally_distributed(&tuple, rs)? {
            // A tuple can pass the predicate yet have a barycenter that
            // lands on a cell boundary of its wall (e.g. the midpoint of
            // two vertices sitting two edges apart); skip those and keep
            // searching for a tuple with genuinely interior η_i.
            match complete_config(tuple, rs, w) {
                Ok(cfg) => return Ok(cfg),
                Err(Error::PostconditionViolated(_)) | Err(Error::DegenerateBarycenter) => {
                    continue
                }
                Err(e) => return Err(e),
            }
        }
    }
    Err(Error::NotFound(format!(
        "no maximally distributed tuple in type {}",
        rs.cartan_type.name()
    )))
}

fn complete_config(
    vertices: Vec<SphericalVertex>,
    rs: &RootSystem,
    w: &WeylGroup,
) -> Result<MaxDistConfig, Error> {
    let n = vertices.len();
    let mut walls = Vec::with_capacity(n);
    let mut etas = Vec::with_capacity(n);
    for i in 0..n {
        let others: Vec<SphericalVertex> = (0..n)
            .filter(|&j| j != i)
            .map(|j| vertices[j].clone())
            .collect();
        let found = walls_containing(&others, rs);
        if found.len() != 1 {
            return Err(Error::PostconditionViolated(format!(
                "{} walls span the complement of vertex {i}",
                found.len()
            )));
        }
        walls.push(found[0].clone());
        etas.push(eta_of(&others, rs)?);
    }

    // ⋂ s_i = ∅ on the sphere: the wall normals are linearly independent.
    let normals: Vec<QVec> = walls.iter().map(|s| s.normal.ambient.clone()).collect();
    if QMat::from_cols(&normals).rank() != n {
        return Err(Error::PostconditionViolated(
            "wall normals are dependent; walls share a sphere point".into(),
        ));
    }

    // Δ: chambers all of whose extreme rays lie in the cone of the ξ_i.
    let dirs: Vec<QVec> = vertices.iter().map(|v| v.direction.clone()).collect();
    let delta_chambers: Vec<Vec<QVec>> = chambers(rs, w)?
        .into_iter()
        .filter(|ch| ch.iter().all(|ray| in_nonneg_cone(&dirs, ray)))
        .collect();
    if delta_chambers.is_empty() {
        return Err(Error::PostconditionViolated("Δ contains no chamber".into()));
    }

    Ok(MaxDistConfig {
        vertices,
        walls,
        etas,
        delta_chambers,
    })
}

/// A deterministic interior point of a top cell of Hull(`others`): the
/// weighted barycenter Σ tʲ ξ_j for the smallest t ≥ 1 that puts the point
/// off every wall not containing the whole hull. Plain barycenter (t = 1)
/// is tried first; a symmetric pair of vertices can have its midpoint on a
/// cell boundary, which larger t avoids.
fn eta_of(others: &[SphericalVertex], rs: &RootSystem) -> Result<QVec, Error> {
    let dim = others[0].direction.len();
    'weights: for t in 1i64..=64 {
        let mut sum = QVec::zeros(dim);
        let mut weight = qi(1);
        for v in others {
            sum = &sum + &v.direction.scale(weight);
            weight *= qi(t);
        }
        if sum.is_zero() {
            continue;
        }
        let eta = sum.ray_canonical();
        for a in &rs.positive_roots {
            let hull_wall = others.iter().all(|v| a.ambient.dot(&v.direction).is_zero());
            if !hull_wall && a.ambient.dot(&eta).is_zero() {
                continue 'weights;
            }
        }
        return Ok(eta);
    }
    Err(Error::DegenerateBarycenter)
}

/// η_i of a configuration (recomputed from the vertices, deterministic).
pub fn eta_point(config: &MaxDistConfig, i: usize, rs: &RootSystem) -> Result<QVec, Error> {
    let n = config.vertices.len();
    if i >= n {
        return Err(Error::ConfigError(format!("eta index {i} out of range")));
    }
    let others: Vec<SphericalVertex> = (0..n)
        .filter(|&j| j != i)
        .map(|j| config.vertices[j].clone())
        .collect();
    eta_of(&others, rs)
}

/// The squared sine of the spherical distance from `xi` to the wall with
/// normal `alpha`, as an exact rational: (ξ,α)² / (‖ξ‖²‖α‖²).
pub fn sin_sq_to_wall(xi: &QVec, alpha: &QVec) -> Q {
    let d = xi.dot(alpha);
    d * d / (xi.dot(xi) * alpha.dot(alpha))
}

/// θ_i = d_T(ξ_i, s_i) = arcsin(|(ξ_i, α_i)| / (‖ξ_i‖‖α_i‖)) ∈ (0, π/2].
pub fn theta_angles(config: &MaxDistConfig) -> Vec<f64> {
    config
        .vertices
        .iter()
        .zip(&config.walls)
        .map(|(xi, s)| {
            let s2 = sin_sq_to_wall(&xi.direction, &s.normal.ambient);
            s2.to_f64().unwrap().sqrt().asin()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::root_systems::{enumerate_positive_roots, CartanType};

    fn setup(name: &str) -> (RootSystem, WeylGroup) {
        let rs = enumerate_positive_roots(&CartanType::parse(name).unwrap()).unwrap();
        let w = generate_weyl_group(&rs).unwrap();
        (rs, w)
    }

    #[test]
    fn weyl_orders() {
        for (name, order) in [("A2", 6), ("B3", 48), ("A1xA1", 4), ("G2", 12), ("D4", 192)] {
            let (_, w) = setup(name);
            assert_eq!(w.elements.len(), order, "{name}");
        }
    }

    #[test]
    fn weyl_elements_permute_roots() {
        for name in ["A2", "B2", "G2", "A3"] {
            let (rs, w) = setup(name);
            let root_keys: HashSet<Vec<(i64, i64)>> = rs
                .positive_roots
                .iter()
                .flat_map(|r| [vec_key(&r.ambient), vec_key(&-&r.ambient)])
                .collect();
            for g in &w.elements {
                for r in &rs.positive_roots {
                    let img = g.mul_vec(&r.ambient);
                    assert!(root_keys.contains(&vec_key(&img)), "{name}");
                }
            }
        }
    }

    #[test]
    fn vertex_counts() {
        let (rs, w) = setup("A2");
        assert_eq!(vertex_set(&rs, &w).unwrap().len(), 6);
        let (rs, w) = setup("A1xA1");
        assert_eq!(vertex_set(&rs, &w).unwrap().len(), 4);
        let (rs, w) = setup("A3");
        let vs = vertex_set(&rs, &w).unwrap();
        assert_eq!(vs.len(), 14);
        let mut orbit_sizes = [0usize; 3];
        for v in &vs {
            orbit_sizes[v.orbit_type] += 1;
        }
        assert_eq!(orbit_sizes, [4, 6, 4]);
    }

    #[test]
    fn a2_vertices_alternate_types_around_circle() {
        let (rs, w) = setup("A2");
        let mut vs = vertex_set(&rs, &w).unwrap();
        // Sort by angle in the sum-zero plane and check types alternate.
        vs.sort_by(|a, b| {
            let ang = |v: &SphericalVertex| {
                let c = v.direction.to_f64();
                // coordinates in an orthogonal basis of the sum-zero plane
                let x = c[0] - c[1];
                let y = c[0] + c[1] - 2.0 * c[2];
                y.atan2(x)
            };
            ang(a).partial_cmp(&ang(b)).unwrap()
        });
        for i in 0..6 {
            assert_ne!(vs[i].orbit_type, vs[(i + 1) % 6].orbit_type);
        }
    }

    #[test]
    fn spans_wall_examples() {
        let (rs, w) = setup("A2");
        let vs = vertex_set(&rs, &w).unwrap();
        // Any single vertex lies on exactly one wall.
        for v in &vs {
            assert!(spans_wall(std::slice::from_ref(v), &rs));
        }
        // Two adjacent (60°-apart) vertices lie on no common wall.
        let adjacent: Vec<SphericalVertex> = {
            let a = vs.iter().find(|v| v.orbit_type == 0).unwrap().clone();
            let b = vs
                .iter()
                .filter(|v| v.orbit_type == 1)
                .find(|v| {
                    let c = a.direction.dot(&v.direction);
                    c.is_positive()
                })
                .unwrap()
                .clone();
            vec![a, b]
        };
        assert!(!spans_wall(&adjacent, &rs));

        let (rs1, w1) = setup("A1xA1");
        let vs1 = vertex_set(&rs1, &w1).unwrap();
        assert!(spans_wall(&[vs1[0].clone()], &rs1));
    }

    #[test]
    fn maxdist_a1a1_axes() {
        let (rs, w) = setup("A1xA1");
        let vs = vertex_set(&rs, &w).unwrap();
        let xi1 = vs.iter().find(|v| v.orbit_type == 0).unwrap().clone();
        let xi2 = vs.iter().find(|v| v.orbit_type == 1).unwrap().clone();
        assert!(is_maximally_distributed(&[xi1, xi2], &rs).unwrap());
    }

    #[test]
    fn maxdist_a2_same_type_pair_true_adjacent_false() {
        let (rs, w) = setup("A2");
        let vs = vertex_set(&rs, &w).unwrap();
        let same: Vec<SphericalVertex> =
            vs.iter().filter(|v| v.orbit_type == 0).cloned().collect();
        // Same-type vertices are pairwise at 2π/3.
        assert!(is_maximally_distributed(&same[..2], &rs).unwrap());
        let a = same[0].clone();
        let b = vs
            .iter()
            .filter(|v| v.orbit_type == 1)
            .find(|v| a.direction.dot(&v.direction).is_positive())
            .unwrap()
            .clone();
        assert!(!is_maximally_distributed(&[a, b], &rs).unwrap());
    }

    #[test]
    fn maxdist_wrong_cardinality() {
        let (rs, w) = setup("A2");
        let vs = vertex_set(&rs, &w).unwrap();
        assert!(matches!(
            is_maximally_distributed(&vs[..3], &rs),
            Err(Error::WrongCardinality {
                expected: 2,
                got: 3
            })
        ));
    }

    #[test]
    fn find_a1a1() {
        let (rs, w) = setup("A1xA1");
        let cfg = find_maximally_distributed(&rs, &w).unwrap();
        assert_eq!(cfg.vertices.len(), 2);
        assert_ne!(cfg.vertices[0].orbit_type, cfg.vertices[1].orbit_type);
        assert_eq!(cfg.delta_chambers.len(), 1);
        let th = theta_angles(&cfg);
        assert!((th[0] - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
        assert!((th[1] - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
        // η_i = the opposite vertex itself.
        assert_eq!(cfg.etas[0], cfg.vertices[1].direction);
        assert_eq!(cfg.etas[1], cfg.vertices[0].direction);
    }

    #[test]
    fn find_a2() {
        let (rs, w) = setup("A2");
        let cfg = find_maximally_distributed(&rs, &w).unwrap();
        // Same-type pair at 2π/3: cos = −1/2 exactly.
        assert_eq!(cfg.vertices[0].orbit_type, cfg.vertices[1].orbit_type);
        let d0 = &cfg.vertices[0].direction;
        let d1 = &cfg.vertices[1].direction;
        let cos_sq = d0.dot(d1) * d0.dot(d1) / (d0.dot(d0) * d1.dot(d1));
        assert_eq!(cos_sq, crate::exact::q(1, 4));
        assert!(d0.dot(d1).is_negative());
        // θ_i = π/3 for both.
        for th in theta_angles(&cfg) {
            assert!((th - std::f64::consts::FRAC_PI_3).abs() < 1e-12);
        }
        // Δ spans two chambers.
        assert_eq!(cfg.delta_chambers.len(), 2);
    }

    #[test]
    fn find_a3_pairwise_wall_intersections_are_antipodal_vertex_pairs() {
        let (rs, w) = setup("A3");
        let cfg = find_maximally_distributed(&rs, &w).unwrap();
        assert_eq!(cfg.vertices.len(), 3);
        let th = theta_angles(&cfg);
        for t in th {
            assert!(t > 0.0);
        }
        // ∩_{k≠j} s_k = {ξ_j, ξ̂_j}: the normals {α_k}_{k≠j} span a plane
        // orthogonal to ξ_j, so the intersection line is R·ξ_j.
        for j in 0..3 {
            let others: Vec<QVec> = (0..3)
                .filter(|&k| k != j)
                .map(|k| cfg.walls[k].normal.ambient.clone())
                .collect();
            assert_eq!(QMat::from_cols(&others).rank(), 2);
            for a in &others {
                assert!(a.dot(&cfg.vertices[j].direction).is_zero());
            }
        }
        assert!(!cfg.delta_chambers.is_empty());
    }

    #[test]
    fn predicate_is_weyl_equivariant() {
        for name in ["A1xA1", "A2", "B2", "A3"] {
            let (rs, w) = setup(name);
            let vs = vertex_set(&rs, &w).unwrap();
            let n = rs.rank();
            for tuple in combinations(&vs, n).into_iter().take(40) {
                let base = is_maximally_distributed(&tuple, &rs).unwrap();
                for g in &w.elements {
                    let moved: Vec<SphericalVertex> = tuple
                        .iter()
                        .map(|v| SphericalVertex {
                            direction: g.mul_vec(&v.direction).ray_canonical(),
                            orbit_type: v.orbit_type,
                        })
                        .collect();
                    assert_eq!(
                        is_maximally_distributed(&moved, &rs).unwrap(),
                        base,
                        "{name}"
                    );
                }
            }
        }
    }

    #[test]
    fn eta_interior_for_found_configs() {
        for name in ["A1xA1", "A2", "A3", "B3"] {
            let (rs, w) = setup(name);
            let cfg = find_maximally_distributed(&rs, &w).unwrap();
            for i in 0..cfg.vertices.len() {
                let eta = eta_point(&cfg, i, &rs).unwrap();
                assert_eq!(eta, cfg.etas[i], "{name}");
                // η_i lies on s_i.
                assert!(cfg.walls[i].normal.ambient.dot(&eta).is_zero(), "{name}");
            }
        }
    }
}
