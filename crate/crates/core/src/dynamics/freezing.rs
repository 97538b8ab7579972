use nalgebra::{DMatrix, DVector};

use crate::algebra::functions::{COTH, SINH, W, W_PRIME, W_SQ};
use crate::algebra::{CartanPoint, LieElement, Subspace, SymmetricSpace};
use crate::error::{Error, Result};
use crate::linalg::{self, real, CMat};
use crate::orbits::SpinPoint;

/// Largest least-squares residual accepted by [`freezing_solve`].
pub const FREEZING_RESIDUAL: f64 = 1e-9;

/// A gauge term `y_M` that keeps the spin variable fixed.
#[derive(Debug, Clone)]
pub struct FreezingSolution {
    pub y_m: LieElement,
    /// Residual of `[y_M, w mu] = [w mu, w' mu]_{A^perp}`.
    pub residual: f64,
    /// `|[y_M - w^2 mu, mu]|`.
    pub frozen_residual: f64,
    /// `|[w^2 Z, Z] - sinh(ad_q)[w Z, w' Z]|` at `Z = mu`.
    pub identity_residual: f64,
}

/// Least-squares `y_M` over the M basis and its residual; no acceptance test.
pub(crate) fn solve_y_m(space: &SymmetricSpace, q: &[f64], coeffs: &[f64]) -> Result<(CMat, f64)> {
    space.check_regular(q, 0.0)?;
    let w_mu = space.ad_fn_on_plus(&W, q, coeffs);
    let wp_mu = space.ad_fn_on_plus(&W_PRIME, q, coeffs);
    let rhs = space.project_raw(&linalg::commutator(&w_mu, &wp_mu), Subspace::APerp);
    let basis = space.m_basis();
    let b = linalg::flatten(&rhs);
    let mut a = DMatrix::<f64>::zeros(b.len(), basis.len());
    for (j, mb) in basis.iter().enumerate() {
        a.set_column(j, &linalg::flatten(&linalg::commutator(mb, &w_mu)));
    }
    let (sol, res) = linalg::least_squares(&a, &b);
    let mut y = linalg::zeros(space.matrix_size());
    for (c, mb) in DVector::iter(&sol).zip(basis) {
        y += mb * real(*c);
    }
    Ok((y, res))
}

/// Solves for a gauge term `y_M` freezing the spin at `mu`, or reports
/// [`Error::NoSolution`].
pub fn freezing_solve(
    space: &SymmetricSpace,
    q: &CartanPoint,
    mu: &SpinPoint,
) -> Result<FreezingSolution> {
    let coeffs = mu.require_on_slice(space)?;
    let qc = q.coords();
    space.check_coords(qc)?;
    let (y, residual) = solve_y_m(space, qc, coeffs)?;
    if residual > FREEZING_RESIDUAL {
        return Err(Error::NoSolution { residual });
    }
    let w2_mu = space.ad_fn_on_plus(&W_SQ, qc, coeffs);
    let frozen_residual = linalg::frobenius(&linalg::commutator(&(&y - &w2_mu), mu.matrix()));
    let identity_residual = identity_434_residual(space, qc, coeffs)?;
    Ok(FreezingSolution {
        y_m: space.element(y)?,
        residual,
        frozen_residual,
        identity_residual,
    })
}

/// `|[w^2(ad_q) Z, Z] - sinh(ad_q)[w(ad_q) Z, w'(ad_q) Z]|` for `Z` in `M^perp`.
pub fn identity_434_residual(space: &SymmetricSpace, q: &[f64], coeffs: &[f64]) -> Result<f64> {
    space.check_regular(q, 0.0)?;
    let z = space.compose_plus(coeffs);
    let lhs = linalg::commutator(&space.ad_fn_on_plus(&W_SQ, q, coeffs), &z);
    let inner = linalg::commutator(
        &space.ad_fn_on_plus(&W, q, coeffs),
        &space.ad_fn_on_plus(&W_PRIME, q, coeffs),
    );
    let rhs = space.ad_fn_raw(&SINH, q, &inner)?;
    Ok(linalg::frobenius(&(lhs - rhs)))
}

/// A simple tensor `coefficient * left (x) right` of the dynamical r-matrix.
#[derive(Debug, Clone)]
pub struct TensorTerm {
    pub coefficient: f64,
    pub left: LieElement,
    pub right: LieElement,
}

/// `sum_alpha sum_k coth(alpha(q)) E^{+,k}_alpha (x) E^{-,k}_alpha`.
pub fn r12_build(space: &SymmetricSpace, q: &CartanPoint) -> Result<Vec<TensorTerm>> {
    space.check_coords(q.coords())?;
    space.check_regular(q.coords(), super::phase::EPS_WALL)?;
    let alphas = space.root_vector_values(q.coords());
    Ok(space
        .root_vectors()
        .iter()
        .zip(alphas)
        .map(|(rv, a)| TensorTerm {
            coefficient: (COTH.eval)(a),
            left: space
                .element(rv.plus.clone())
                .expect("root vectors lie in the algebra"),
            right: space
                .element(rv.minus.clone())
                .expect("root vectors lie in the algebra"),
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::SpaceSpec;
    use crate::orbits::{mu_kks, random_slice_spin, xi_red, ReducedOrbitCase};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_q(space: &SymmetricSpace, rng: &mut ChaCha8Rng) -> Vec<f64> {
        let r = space.coord_len();
        let mut q: Vec<f64> = (0..r)
            .map(|j| 0.6 * (r - j) as f64 + rng.random_range(0.0..0.5))
            .collect();
        if let SpaceSpec::SlKc { k } = space.spec() {
            let mean = q.iter().sum::<f64>() / k as f64;
            q.iter_mut().for_each(|x| *x -= mean);
        }
        q
    }

    #[test]
    fn kks_spin_freezes() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for k in 2..=4 {
            let s = SymmetricSpace::build(SpaceSpec::SlKc { k }).unwrap();
            let mu = SpinPoint::new(&s, mu_kks(k, 1.3)).unwrap();
            for _ in 0..5 {
                let q = random_q(&s, &mut rng);
                let sol = freezing_solve(&s, &q.into(), &mu).unwrap();
                assert!(sol.residual < 1e-9);
                assert!(sol.frozen_residual < 1e-8, "{}", sol.frozen_residual);
                assert!(sol.identity_residual < 1e-10);
            }
        }
    }

    #[test]
    fn reduced_bc_spin_freezes() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for (n, kappa, x) in [(1, 1.0, 0.3), (2, 2.0, 0.4), (2, 1.0, -0.5)] {
            let s = SymmetricSpace::build(SpaceSpec::SuMn { m: n + 1, n }).unwrap();
            let mu = xi_red(&s, ReducedOrbitCase::BC { kappa, x }).unwrap();
            for _ in 0..5 {
                let q = random_q(&s, &mut rng);
                let sol = freezing_solve(&s, &q.into(), &mu).unwrap();
                assert!(sol.frozen_residual < 1e-8);
            }
        }
        let s = SymmetricSpace::build(SpaceSpec::SuMn { m: 3, n: 2 }).unwrap();
        let mu = xi_red(&s, ReducedOrbitCase::D { kappa: 1.0 }).unwrap();
        assert!(freezing_solve(&s, &vec![1.1, 0.4].into(), &mu).is_ok());
    }

    #[test]
    fn identity_434_for_random_spin() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for spec in [
            SpaceSpec::SuMn { m: 2, n: 2 },
            SpaceSpec::SuMn { m: 3, n: 1 },
            SpaceSpec::SlKc { k: 3 },
        ] {
            let s = SymmetricSpace::build(spec).unwrap();
            let z = random_slice_spin(&s, 1.0, &mut rng);
            let q = random_q(&s, &mut rng);
            assert!(identity_434_residual(&s, &q, z.coefficients().unwrap()).unwrap() < 1e-10);
        }
    }

    #[test]
    fn generic_spin_has_no_freezing_gauge() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let s = SymmetricSpace::build(SpaceSpec::SuMn { m: 2, n: 2 }).unwrap();
        let mu = random_slice_spin(&s, 1.0, &mut rng);
        let r = freezing_solve(&s, &vec![1.2, 0.5].into(), &mu);
        assert!(matches!(r, Err(Error::NoSolution { .. })), "{r:?}");
    }

    #[test]
    fn r12_su21() {
        let s = SymmetricSpace::build(SpaceSpec::SuMn { m: 2, n: 1 }).unwrap();
        let terms = r12_build(&s, &vec![1.0].into()).unwrap();
        assert_eq!(terms.len(), 3);
        let mut coeffs: Vec<f64> = terms.iter().map(|t| t.coefficient).collect();
        coeffs.sort_by(f64::total_cmp);
        let c1 = 1.0 / 1f64.tanh();
        let c2 = 1.0 / 2f64.tanh();
        assert!((coeffs[0] - c2).abs() < 1e-15);
        assert!((coeffs[1] - c1).abs() < 1e-15 && (coeffs[2] - c1).abs() < 1e-15);
        for t in &terms {
            let l = t.left.matrix();
            let r = t.right.matrix();
            assert!(linalg::max_abs(&(s.project_raw(l, Subspace::MPerp) - l)) < 1e-15);
            assert!(linalg::max_abs(&(s.project_raw(r, Subspace::APerp) - r)) < 1e-15);
        }
    }

    #[test]
    fn r12_term_count_is_sum_of_multiplicities() {
        for spec in [
            SpaceSpec::SuMn { m: 3, n: 2 },
            SpaceSpec::SuMn { m: 2, n: 2 },
            SpaceSpec::SlKc { k: 4 },
        ] {
            let s = SymmetricSpace::build(spec).unwrap();
            let q = match spec {
                SpaceSpec::SlKc { .. } => vec![1.5, 0.5, -0.5, -1.5],
                _ => vec![1.3, 0.6],
            };
            let want: usize = s.positive_roots().iter().map(|r| r.multiplicity).sum();
            assert_eq!(r12_build(&s, &q.into()).unwrap().len(), want);
        }
        let s = SymmetricSpace::build(SpaceSpec::SuMn { m: 2, n: 2 }).unwrap();
        assert!(r12_build(&s, &vec![1.0, 1.0].into()).is_err());
    }
}
