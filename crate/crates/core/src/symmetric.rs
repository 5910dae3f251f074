//! The AN-map (ℍ²)ⁿ → SL_{n+1}(ℝ)/SO(n+1): a product of affine groups
//! inside the upper triangular subgroup, built from strongly commuting
//! roots of A_n, together with the symmetric-space distance on positive
//! definite matrices and a seeded quasi-isometry certification harness.

use crate::exact::{qi, QMat, QVec, Q};
use crate::hyperbolic::{hyperbolic_distance, HyperbolicPoint};
use crate::root_systems::{enumerate_positive_roots, select_strongly_commuting_roots, CartanType, Family, Root};
use crate::Error;
use nalgebra::DMatrix;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// The data of the embedding: for each of the n selected roots
/// α_i = e_{a_i} − e_{b_i} of A_n, a traceless diagonal X_i with
/// α_j(X_i) = 2δ_{ij} and the elementary nilpotent Z_i = E_{a_i b_i}.
#[derive(Clone, Debug)]
pub struct ANEmbedding {
    pub n: usize,
    pub roots: Vec<Root>,
    /// Diagonals of the X_i, exact rationals of length n+1.
    pub x_diag: Vec<QVec>,
    /// Positions (a_i, b_i) of the Z_i = E_{a_i b_i}.
    pub z_pos: Vec<(usize, usize)>,
}

fn root_position(r: &Root) -> Result<(usize, usize), Error> {
    let mut a = None;
    let mut b = None;
    for (k, c) in r.ambient.0.iter().enumerate() {
        if *c == qi(1) {
            a = Some(k);
        } else if *c == qi(-1) {
            b = Some(k);
        } else if !c.is_zero() {
            return Err(Error::Internal("root is not of the form e_a - e_b".into()));
        }
    }
    match (a, b) {
        (Some(a), Some(b)) => Ok((a, b)),
        _ => Err(Error::Internal("root is not of the form e_a - e_b".into())),
    }
}

/// Build the embedding for rank n, verifying its invariants exactly.
pub fn build_an_embedding(n: usize) -> Result<ANEmbedding, Error> {
    if n == 0 || n > 6 {
        return Err(Error::ConfigError(format!(
            "AN embedding rank must be in 1..=6, got {n}"
        )));
    }
    let rs = enumerate_positive_roots(&CartanType::simple(Family::A, n)?)?;
    let roots = select_strongly_commuting_roots(&rs)?;
    let dim = n + 1;

    // Solve for each X_i: n root equations α_j(X_i) = 2δ_{ij} plus trace 0.
    let mut rows: Vec<QVec> = roots.iter().map(|r| r.ambient.clone()).collect();
    rows.push(QVec(vec![qi(1); dim]));
    let system = QMat::from_rows(&rows);
    let mut x_diag = Vec::with_capacity(n);
    for i in 0..n {
        let mut rhs = QVec::zeros(n + 1);
        rhs.0[i] = qi(2);
        let sol = system.solve(&rhs).ok_or(Error::SingularBasis)?;
        x_diag.push(sol);
    }
    let z_pos: Vec<(usize, usize)> = roots
        .iter()
        .map(root_position)
        .collect::<Result<_, _>>()?;

    let emb = ANEmbedding {
        n,
        roots,
        x_diag,
        z_pos,
    };
    emb.verify_exact()?;
    Ok(emb)
}

impl ANEmbedding {
    /// Exact invariant checks: α_j(X_i) = 2δ_{ij}, trace X_i = 0, and
    /// exp(tX_i) commutes with I + sZ_j for i ≠ j (equivalent to the
    /// diagonal of X_i taking equal values at the two positions of Z_j).
    pub fn verify_exact(&self) -> Result<(), Error> {
        for i in 0..self.n {
            let x = &self.x_diag[i];
            if !x.0.iter().fold(Q::from_integer(0), |acc, v| acc + v).is_zero() {
                return Err(Error::PostconditionViolated(format!("trace X_{i} != 0")));
            }
            for j in 0..self.n {
                let val = self.roots[j].ambient.dot(x);
                let expected = if i == j { qi(2) } else { qi(0) };
                if val != expected {
                    return Err(Error::PostconditionViolated(format!(
                        "alpha_{j}(X_{i}) = {val}, expected {expected}"
                    )));
                }
                if i != j {
                    let (a, b) = self.z_pos[j];
                    if x.0[a] != x.0[b] {
                        return Err(Error::PostconditionViolated(format!(
                            "exp(tX_{i}) does not commute with I + sZ_{j}"
                        )));
                    }
                }
            }
            // Z_i Z_j = 0 for all pairs (sum-freeness makes the products
            // vanish), so the nilpotent factors commute exactly.
            for j in 0..self.n {
                if i == j {
                    continue;
                }
                let (_, bi) = self.z_pos[i];
                let (aj, _) = self.z_pos[j];
                let (ai, _) = self.z_pos[i];
                let (_, bj) = self.z_pos[j];
                if bi == aj || bj == ai {
                    return Err(Error::PostconditionViolated(format!(
                        "Z_{i} Z_{j} != 0"
                    )));
                }
            }
        }
        Ok(())
    }

    /// The group element g = Π exp(t_i X_i)(I + s_i Z_i), as a dense
    /// matrix. Thanks to exact commutation this equals
    /// exp(Σ t_i X_i)·(I + Σ s_i Z_i).
    pub fn group_matrix(&self, p: &[HyperbolicPoint]) -> DMatrix<f64> {
        assert_eq!(p.len(), self.n);
        let dim = self.n + 1;
        let mut diag = vec![0.0; dim];
        for (i, pt) in p.iter().enumerate() {
            for (k, d) in diag.iter_mut().enumerate() {
                *d += pt.t * self.x_diag[i].0[k].to_f64().unwrap();
            }
        }
        let mut g = DMatrix::zeros(dim, dim);
        for k in 0..dim {
            g[(k, k)] = diag[k].exp();
        }
        for (i, pt) in p.iter().enumerate() {
            let (a, b) = self.z_pos[i];
            // exp(D)·(I + Σ sZ): entry (a,b) picks up e^{D_a}·s.
            g[(a, b)] = g[(a, a)] * pt.s;
        }
        g
    }

    /// The embedded point P = g gᵀ.
    pub fn embed(&self, p: &[HyperbolicPoint]) -> DMatrix<f64> {
        let g = self.group_matrix(p);
        &g * g.transpose()
    }
}

/// Singular values by one-sided Jacobi (cyclic column pairs). Chosen over
/// a bidiagonalization SVD because it attains high *relative* accuracy on
/// column-graded matrices, which is what the embedded group elements are:
/// small singular values of exp(T)(I+N) would otherwise drown in
/// eps·‖M‖ absolute error and wreck log-scale distances.
pub fn jacobi_singular_values(m: &DMatrix<f64>) -> Vec<f64> {
    let mut a = m.clone();
    let (rows, cols) = a.shape();
    assert_eq!(rows, cols);
    let tol = 1e-15;
    for _sweep in 0..60 {
        let mut rotated = false;
        for p in 0..cols {
            for q in (p + 1)..cols {
                let mut app = 0.0;
                let mut aqq = 0.0;
                let mut apq = 0.0;
                for r in 0..rows {
                    app += a[(r, p)] * a[(r, p)];
                    aqq += a[(r, q)] * a[(r, q)];
                    apq += a[(r, p)] * a[(r, q)];
                }
                if apq.abs() <= tol * (app * aqq).sqrt() || apq == 0.0 {
                    continue;
                }
                rotated = true;
                let zeta = (aqq - app) / (2.0 * apq);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for r in 0..rows {
                    let vp = a[(r, p)];
                    let vq = a[(r, q)];
                    a[(r, p)] = c * vp - s * vq;
                    a[(r, q)] = s * vp + c * vq;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    (0..cols)
        .map(|j| (0..rows).map(|r| a[(r, j)] * a[(r, j)]).sum::<f64>().sqrt())
        .collect()
}

fn check_spd(p: &DMatrix<f64>) -> Result<(), Error> {
    let (r, c) = p.shape();
    if r != c {
        return Err(Error::NotSpd);
    }
    let scale = p.amax();
    for i in 0..r {
        for j in (i + 1)..c {
            if (p[(i, j)] - p[(j, i)]).abs() > 1e-12 * scale.max(1.0) {
                return Err(Error::NotSpd);
            }
        }
    }
    Ok(())
}

/// The invariant distance d(P, Q) = sqrt(Σ log²λ_k), λ_k the eigenvalues
/// of P⁻¹Q. Computed as 2·sqrt(Σ log²σ_k(L_P⁻¹ L_Q)) through Cholesky
/// factors; the 2×2 case uses the closed form via the Frobenius norm and
/// determinant (fully stable even at large distances).
pub fn spd_distance(p: &DMatrix<f64>, q: &DMatrix<f64>) -> Result<f64, Error> {
    check_spd(p)?;
    check_spd(q)?;
    let sym = |m: &DMatrix<f64>| (m + m.transpose()) * 0.5;
    let lp = nalgebra::Cholesky::new(sym(p)).ok_or(Error::NotSpd)?;
    let lq = nalgebra::Cholesky::new(sym(q)).ok_or(Error::NotSpd)?;
    let m = lp.l().solve_lower_triangular(&lq.l()).ok_or(Error::NotSpd)?;
    Ok(log_distance_from_group_matrix(&m))
}

/// d(I, MMᵀ) for an invertible M: 2·sqrt(Σ log²σ_k(M)).
pub fn log_distance_from_group_matrix(m: &DMatrix<f64>) -> f64 {
    let n = m.nrows();
    if n == 2 {
        // σ² are the roots of x² − f x + det², f = ‖M‖_F².
        let f = m.iter().map(|v| v * v).sum::<f64>();
        let det = (m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]).abs();
        let smax_sq = 0.5 * (f + (f * f - 4.0 * det * det).max(0.0).sqrt());
        let l1 = 0.5 * smax_sq.ln();
        let l2 = det.ln() - l1;
        return 2.0 * (l1 * l1 + l2 * l2).sqrt();
    }
    let sv = jacobi_singular_values(&m.transpose());
    2.0 * sv.iter().map(|s| s.ln().powi(2)).sum::<f64>().sqrt()
}

/// L¹ product distance on (ℍ²)ⁿ.
pub fn product_distance(p: &[HyperbolicPoint], q: &[HyperbolicPoint]) -> f64 {
    assert_eq!(p.len(), q.len());
    p.iter()
        .zip(q)
        .map(|(a, b)| hyperbolic_distance(a, b))
        .sum()
}

/// Symmetric-space distance between two embedded points, computed in the
/// numerically favorable frame: d = d(I, embed(p⁻¹q)).
pub fn embedded_distance(e: &ANEmbedding, p: &[HyperbolicPoint], q: &[HyperbolicPoint]) -> f64 {
    let rel: Vec<HyperbolicPoint> = p
        .iter()
        .zip(q)
        .map(|(a, b)| a.inverse().compose(b))
        .collect();
    log_distance_from_group_matrix(&e.group_matrix(&rel))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QiConfig {
    pub seed: u64,
    pub samples: usize,
    pub d_min: f64,
    pub d_max: f64,
}

impl Default for QiConfig {
    fn default() -> Self {
        QiConfig {
            seed: 0,
            samples: 10_000,
            d_min: 1.0,
            d_max: 64.0,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QiBin {
    pub range: [f64; 2],
    pub max_ratio: f64,
    pub min_ratio: f64,
    pub count: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QiWitness {
    pub p: Vec<HyperbolicPoint>,
    pub q: Vec<HyperbolicPoint>,
    pub product_distance: f64,
    pub spd_distance: f64,
    pub ratio: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QiReport {
    pub n: usize,
    pub seed: u64,
    pub samples: usize,
    pub d_min: f64,
    pub d_max: f64,
    pub bins: Vec<QiBin>,
    /// Empirical upper multiplicative constant: max ratio over all samples.
    pub lambda_hat: f64,
    /// Empirical lower constant: min ratio over samples with d ≥ 10.
    pub c_hat: f64,
    pub witness_max: Option<QiWitness>,
    pub witness_min: Option<QiWitness>,
}

/// Monte Carlo quasi-isometry certificate: N pairs with product distance
/// stratified into dyadic bins over [d_min, d_max]; per-bin ratio extremes
/// and global worst-case witnesses. Deterministic given the seed.
pub fn certify_qi(e: &ANEmbedding, cfg: &QiConfig) -> Result<QiReport, Error> {
    if cfg.samples == 0 {
        return Err(Error::ConfigError("samples must be >= 1".into()));
    }
    if !(cfg.d_min > 0.0 && cfg.d_min < cfg.d_max) {
        return Err(Error::ConfigError("need 0 < d_min < d_max".into()));
    }
    let n_bins = (cfg.d_max / cfg.d_min).log2().ceil().max(1.0) as usize;
    if cfg.samples < n_bins {
        return Err(Error::EmptyBin(format!(
            "{} samples cannot fill {n_bins} dyadic bins",
            cfg.samples
        )));
    }
    let edges: Vec<(f64, f64)> = (0..n_bins)
        .map(|k| {
            let lo = cfg.d_min * (2f64).powi(k as i32);
            (lo, (lo * 2.0).min(cfg.d_max))
        })
        .collect();

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut bins: Vec<QiBin> = edges
        .iter()
        .map(|&(lo, hi)| QiBin {
            range: [lo, hi],
            max_ratio: f64::NEG_INFINITY,
            min_ratio: f64::INFINITY,
            count: 0,
        })
        .collect();
    let mut lambda_hat = f64::NEG_INFINITY;
    let mut c_hat = f64::INFINITY;
    let mut witness_max = None;
    let mut witness_min = None;

    for i in 0..cfg.samples {
        let bin = i % n_bins;
        let (lo, hi) = edges[bin];
        let d_target: f64 = rng.gen_range(lo..hi);
        // Split the target distance over the factors via uniform cuts.
        let mut cuts: Vec<f64> = (0..e.n - 1).map(|_| rng.gen::<f64>()).collect();
        cuts.push(0.0);
        cuts.push(1.0);
        cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut p = Vec::with_capacity(e.n);
        let mut q = Vec::with_capacity(e.n);
        for f in 0..e.n {
            let df = (cuts[f + 1] - cuts[f]) * d_target;
            let theta = rng.gen_range(0.0..std::f64::consts::TAU);
            let base = HyperbolicPoint {
                t: rng.gen_range(-2.0..2.0),
                s: rng.gen_range(-2.0..2.0),
            };
            p.push(base);
            q.push(base.at_distance(df, theta));
        }
        let dp = product_distance(&p, &q);
        let ds = embedded_distance(e, &p, &q);
        let ratio = ds / dp;
        let b = &mut bins[bin];
        b.count += 1;
        b.max_ratio = b.max_ratio.max(ratio);
        b.min_ratio = b.min_ratio.min(ratio);
        if ratio > lambda_hat {
            lambda_hat = ratio;
            witness_max = Some(QiWitness {
                p: p.clone(),
                q: q.clone(),
                product_distance: dp,
                spd_distance: ds,
                ratio,
            });
        }
        if dp >= 10.0 && ratio < c_hat {
            c_hat = ratio;
            witness_min = Some(QiWitness {
                p,
                q,
                product_distance: dp,
                spd_distance: ds,
                ratio,
            });
        }
    }

    Ok(QiReport {
        n: e.n,
        seed: cfg.seed,
        samples: cfg.samples,
        d_min: cfg.d_min,
        d_max: cfg.d_max,
        bins,
        lambda_hat,
        c_hat,
        witness_max,
        witness_min,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q;

    #[test]
    fn build_n1_and_n2_match_closed_forms() {
        let e1 = build_an_embedding(1).unwrap();
        assert_eq!(e1.x_diag[0].0, vec![qi(1), qi(-1)]);
        assert_eq!(e1.z_pos[0], (0, 1));

        let e2 = build_an_embedding(2).unwrap();
        assert_eq!(e2.x_diag[0].0, vec![q(2, 3), q(2, 3), q(-4, 3)]);
        assert_eq!(e2.x_diag[1].0, vec![q(2, 3), q(-4, 3), q(2, 3)]);
        assert_eq!(e2.z_pos[0], (0, 2));
        assert_eq!(e2.z_pos[1], (0, 1));
    }

    #[test]
    fn build_all_supported_ranks() {
        for n in 1..=6 {
            build_an_embedding(n).unwrap();
        }
        assert!(build_an_embedding(0).is_err());
        assert!(build_an_embedding(7).is_err());
    }

    #[test]
    fn embed_base_cases() {
        let e = build_an_embedding(1).unwrap();
        let p0 = [HyperbolicPoint::base()];
        let id = e.embed(&p0);
        assert!((id - DMatrix::<f64>::identity(2, 2)).amax() < 1e-14);

        let pt = [HyperbolicPoint { t: 1.0, s: 0.0 }];
        let d = e.embed(&pt);
        assert!((d[(0, 0)] - 2.0f64.exp()).abs() < 1e-12);
        assert!((d[(1, 1)] - (-2.0f64).exp()).abs() < 1e-14);
        assert!(d[(0, 1)].abs() < 1e-14);

        let ps = [HyperbolicPoint { t: 0.0, s: 0.5 }];
        let m = e.embed(&ps);
        assert!((m[(0, 0)] - 1.25).abs() < 1e-14);
        assert!((m[(0, 1)] - 0.5).abs() < 1e-14);
        assert!((m[(1, 1)] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn spd_distance_examples() {
        let i2 = DMatrix::<f64>::identity(2, 2);
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            2.0f64.exp(),
            (-2.0f64).exp(),
        ]));
        let got = spd_distance(&i2, &d).unwrap();
        assert!((got - 2.0 * 2.0f64.sqrt()).abs() < 1e-12);
        assert!(spd_distance(&d, &d).unwrap().abs() < 1e-12);
    }

    #[test]
    fn spd_distance_invariance_and_symmetry() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let n = 3;
            let a = DMatrix::<f64>::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
            let b = DMatrix::<f64>::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
            let p = &a * a.transpose() + DMatrix::identity(n, n);
            let q = &b * b.transpose() + DMatrix::identity(n, n);
            let d1 = spd_distance(&p, &q).unwrap();
            let d2 = spd_distance(&q, &p).unwrap();
            assert!((d1 - d2).abs() < 1e-9);
            // congruence by a unimodular matrix
            let mut g = DMatrix::<f64>::identity(n, n);
            g[(0, 1)] = rng.gen_range(-2.0..2.0);
            g[(1, 2)] = rng.gen_range(-2.0..2.0);
            let gp = &g * &p * g.transpose();
            let gq = &g * &q * g.transpose();
            let d3 = spd_distance(&gp, &gq).unwrap();
            assert!((d1 - d3).abs() < 1e-8 * (1.0 + d1));
        }
    }

    #[test]
    fn spd_distance_triangle_inequality() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..1000 {
            let n = 3;
            let mk = |rng: &mut ChaCha8Rng| {
                let a = DMatrix::<f64>::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
                &a * a.transpose() + DMatrix::identity(n, n) * 0.1
            };
            let p = mk(&mut rng);
            let q = mk(&mut rng);
            let r = mk(&mut rng);
            let dpq = spd_distance(&p, &q).unwrap();
            let dqr = spd_distance(&q, &r).unwrap();
            let dpr = spd_distance(&p, &r).unwrap();
            assert!(dpr <= dpq + dqr + 1e-9);
        }
    }

    #[test]
    fn spd_distance_rejects_non_spd() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]);
        let i2 = DMatrix::<f64>::identity(2, 2);
        assert!(matches!(spd_distance(&m, &i2), Err(Error::NotSpd)));
        let asym = DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.0, 1.0]);
        assert!(matches!(spd_distance(&asym, &i2), Err(Error::NotSpd)));
    }

    #[test]
    fn n1_exactness_sqrt2() {
        // |d_spd − √2 d_ℍ| ≤ 1e−8 (1+d) over seeded pairs spanning [0.01, 50].
        let e = build_an_embedding(1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for i in 0..1000 {
            let d_target = 0.01 + (50.0 - 0.01) * (i as f64 / 999.0);
            let p = [HyperbolicPoint {
                t: rng.gen_range(-2.0..2.0),
                s: rng.gen_range(-2.0..2.0),
            }];
            let theta = rng.gen_range(0.0..std::f64::consts::TAU);
            let q = [p[0].at_distance(d_target, theta)];
            let dh = product_distance(&p, &q);
            let ds = embedded_distance(&e, &p, &q);
            assert!(
                (ds - 2.0f64.sqrt() * dh).abs() <= 1e-8 * (1.0 + dh),
                "d={dh} ds={ds}"
            );
        }
    }

    #[test]
    fn factor_directions_closed_form() {
        // Moving a single factor from the base point: the s-direction is
        // scaled by exactly √2; the t-direction gives d_spd = 2|t|·‖X_i‖_F
        // against d_ℍ = 2|t|, so the ratio is ‖X_i‖_F — equal to √2 only
        // for n = 1, strictly larger for n ≥ 2.
        for n in 1..=3usize {
            let e = build_an_embedding(n).unwrap();
            for i in 0..n {
                let xf: f64 = e.x_diag[i]
                    .0
                    .iter()
                    .map(|v| v.to_f64().unwrap().powi(2))
                    .sum::<f64>()
                    .sqrt();
                let mut p = vec![HyperbolicPoint::base(); n];
                p[i] = HyperbolicPoint { t: 0.7, s: 0.0 };
                let base = vec![HyperbolicPoint::base(); n];
                let ds = embedded_distance(&e, &base, &p);
                let dh = product_distance(&base, &p);
                assert!((ds / dh - xf).abs() < 1e-10, "t-dir n={n} i={i}");

                let mut ps = vec![HyperbolicPoint::base(); n];
                ps[i] = HyperbolicPoint { t: 0.0, s: 1.3 };
                let ds = embedded_distance(&e, &base, &ps);
                let dh = product_distance(&base, &ps);
                assert!((ds / dh - 2.0f64.sqrt()).abs() < 1e-10, "s-dir n={n} i={i}");
            }
            if n == 1 {
                let x1: f64 = e.x_diag[0]
                    .0
                    .iter()
                    .map(|v| v.to_f64().unwrap().powi(2))
                    .sum::<f64>()
                    .sqrt();
                assert!((x1 - 2.0f64.sqrt()).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn left_invariance() {
        let e = build_an_embedding(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..100 {
            let rnd = |rng: &mut ChaCha8Rng| HyperbolicPoint {
                t: rng.gen_range(-1.5..1.5),
                s: rng.gen_range(-1.5..1.5),
            };
            let h: Vec<_> = (0..2).map(|_| rnd(&mut rng)).collect();
            let p: Vec<_> = (0..2).map(|_| rnd(&mut rng)).collect();
            let q: Vec<_> = (0..2).map(|_| rnd(&mut rng)).collect();
            let hp: Vec<_> = h.iter().zip(&p).map(|(a, b)| a.compose(b)).collect();
            let hq: Vec<_> = h.iter().zip(&q).map(|(a, b)| a.compose(b)).collect();
            let d0 = embedded_distance(&e, &p, &q);
            let d1 = embedded_distance(&e, &hp, &hq);
            assert!((d0 - d1).abs() < 1e-8 * (1.0 + d0));
            // Also against the direct Cholesky route at moderate scale.
            let d2 = spd_distance(&e.embed(&p), &e.embed(&q)).unwrap();
            assert!((d0 - d2).abs() < 1e-7 * (1.0 + d0));
        }
    }

    #[test]
    fn certify_qi_n1_constant_ratio() {
        let e = build_an_embedding(1).unwrap();
        let cfg = QiConfig {
            seed: 3,
            samples: 500,
            d_min: 1.0,
            d_max: 64.0,
        };
        let r = certify_qi(&e, &cfg).unwrap();
        for b in &r.bins {
            assert!(b.count > 0);
            assert!((b.max_ratio - 2.0f64.sqrt()).abs() < 1e-8);
            assert!((b.min_ratio - 2.0f64.sqrt()).abs() < 1e-8);
        }
        assert!(r.witness_max.is_some() && r.witness_min.is_some());
    }

    #[test]
    fn certify_qi_deterministic() {
        let e = build_an_embedding(2).unwrap();
        let cfg = QiConfig {
            seed: 99,
            samples: 300,
            d_min: 1.0,
            d_max: 32.0,
        };
        let a = serde_json::to_string(&certify_qi(&e, &cfg).unwrap()).unwrap();
        let b = serde_json::to_string(&certify_qi(&e, &cfg).unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn certify_qi_config_errors() {
        let e = build_an_embedding(1).unwrap();
        let bad = QiConfig {
            seed: 0,
            samples: 2,
            d_min: 1.0,
            d_max: 64.0,
        };
        assert!(matches!(certify_qi(&e, &bad), Err(Error::EmptyBin(_))));
        let bad2 = QiConfig {
            seed: 0,
            samples: 10,
            d_min: 2.0,
            d_max: 1.0,
        };
        assert!(matches!(certify_qi(&e, &bad2), Err(Error::ConfigError(_))));
    }
}
