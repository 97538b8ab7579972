use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{CartanPoint, SpaceSpec, Subspace, SymmetricSpace};
use crate::error::{Error, Result};
use crate::linalg::{self, real, CMat};
use crate::orbits::{build_slice_point, j_plus, SpinPoint};

use super::invariants::{gradient_raw, InvariantClass};
use super::phase::{PhasePoint, EPS_WALL};

/// Smallest admissible gap between distinct eigenvalues or singular values.
pub const EPS_DEGENERATE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectionOptions {
    /// Number of random starts for the `M`-gauge alignment; 0 disables it.
    pub gauge_starts: usize,
    pub seed: u64,
}

impl Default for ProjectionOptions {
    fn default() -> Self {
        Self {
            gauge_starts: 4,
            seed: 0,
        }
    }
}

/// Point reached by the Hamiltonian flow of `f o K(1)` at time `t`, computed
/// by the projection method.
pub fn flow_projection(
    space: &SymmetricSpace,
    pt0: &PhasePoint,
    class: InvariantClass,
    t: f64,
) -> Result<PhasePoint> {
    flow_projection_with(space, pt0, class, t, &ProjectionOptions::default())
}

pub fn flow_projection_with(
    space: &SymmetricSpace,
    pt0: &PhasePoint,
    class: InvariantClass,
    t: f64,
    opts: &ProjectionOptions,
) -> Result<PhasePoint> {
    if !class.is_g_invariant() {
        return Err(Error::Unsupported(format!(
            "projection method needs a G-invariant function, got {class}"
        )));
    }
    class.validate(space.spec())?;
    let up = build_slice_point(space, pt0.q(), pt0.p(), pt0.xi())?;
    let j0 = up.j_minus.matrix() + j_plus(&up.lambda, up.j_minus.matrix());
    let grad = gradient_raw(space, class, &j0)?;
    // Lambda(t) = e^{tG} Lambda_0 e^{-t theta(G)} = M M^* with M = e^{tG} Lambda_0^{1/2},
    // since -theta(G) = G^* on both families. Only the dominant singular pairs of M
    // are accurate when q is large, so the rest are read off from M^{-*}.
    let fwd = linalg::expm(&(&grad * real(t))) * linalg::hermitian_function(&up.lambda, f64::sqrt);
    let inv = linalg::expm(&(&grad * real(-t))).adjoint()
        * linalg::hermitian_function(&up.lambda, |x| 1.0 / x.sqrt());
    let (q, g) = cartan_factor(space, &fwd, &inv, t)?;
    let gi = g.adjoint();
    let j_minus = &gi * up.j_minus.matrix() * &g;
    let p = space.cartan_coords(&space.project_raw(&j_minus, Subspace::A));
    let xi = &gi * up.xi.matrix() * &g;
    let m_part = linalg::frobenius(&space.project_raw(&xi, Subspace::M));
    if m_part > 1e-8 * linalg::frobenius(&xi).max(1.0) {
        return Err(Error::OffSlice { norm: m_part });
    }
    let xi = if opts.gauge_starts > 0 && space.spin_dim() > 0 {
        align_gauge(space, &xi, pt0.xi().matrix(), opts)
    } else {
        xi
    };
    let coeffs = space.plus_coeffs(&xi);
    PhasePoint::new(
        space,
        CartanPoint::new(q),
        CartanPoint::new(p),
        SpinPoint::from_coefficients(space, coeffs)?,
    )
}

/// Singular values and left singular vectors of `x`, largest first.
fn sorted_svd(x: &CMat) -> Result<(Vec<f64>, CMat)> {
    if x.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::InvalidArgument("flow overflowed".into()));
    }
    let svd = x.clone().svd(true, false);
    let u = svd.u.expect("requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let mut out = linalg::zeros(x.nrows());
    for (dst, &src) in order.iter().enumerate() {
        out.set_column(dst, &u.column(src));
    }
    Ok((order.iter().map(|&j| svd.singular_values[j]).collect(), out))
}

/// Gram-Schmidt on the first `cols` columns, in place.
fn orthonormalize_columns(u: &mut CMat, cols: usize) {
    for j in 0..cols {
        let mut v = u.column(j).clone_owned();
        for _ in 0..2 {
            for i in 0..j {
                let ui = u.column(i);
                let proj = ui.dotc(&v);
                v -= ui * proj;
            }
        }
        let norm = v.norm();
        u.set_column(j, &(v / real(norm)));
    }
}

/// Writes `Lambda = M M^*` as `g e^{2 e(q)} g^{-1}` with `q` in the closed
/// chamber and `g` in `G_+`, given `M` and `M^{-*}`.
fn cartan_factor(
    space: &SymmetricSpace,
    fwd: &CMat,
    inv: &CMat,
    t: f64,
) -> Result<(Vec<f64>, CMat)> {
    let (q, g) = match space.spec() {
        SpaceSpec::SuMn { m, n } => {
            // The eigenvector of Q for +q_i is (a_i, b_i)/sqrt(2) with B b_i = q_i a_i.
            let (sv, u) = sorted_svd(fwd)?;
            let q: Vec<f64> = sv[..n].iter().map(|s| s.ln()).collect();
            let mut ua = linalg::zeros(m);
            let mut vb = linalg::zeros(n);
            for i in 0..n {
                let col = u.column(i);
                ua.set_column(i, &col.rows(0, m));
                vb.set_column(i, &col.rows(m, n));
            }
            orthonormalize_columns(&mut ua, n);
            orthonormalize_columns(&mut vb, n);
            complete_unitary(&mut ua, n);
            let mut g = linalg::zeros(m + n);
            g.view_mut((0, 0), (m, m)).copy_from(&ua);
            g.view_mut((m, m), (n, n)).copy_from(&vb);
            let phase = g.determinant().arg();
            if m > n {
                let c = Complex64::from_polar(1.0, -phase);
                for i in 0..m {
                    g[(i, m - 1)] *= c;
                }
            } else {
                let c = Complex64::from_polar(1.0, -phase / 2.0);
                for i in 0..m + n {
                    g[(i, 0)] *= c;
                    g[(i, m)] *= c;
                }
            }
            check_gaps(&q, t, true)?;
            (q, g)
        }
        SpaceSpec::SlKc { k } => {
            let top = k.div_ceil(2);
            let (sv, u) = sorted_svd(fwd)?;
            let (sw, w) = sorted_svd(inv)?;
            let mut g = linalg::zeros(k);
            let mut q = Vec::with_capacity(k);
            for i in 0..top {
                g.set_column(i, &u.column(i));
                q.push(sv[i].ln());
            }
            for i in top..k {
                let j = k - 1 - i;
                g.set_column(i, &w.column(j));
                q.push(-sw[j].ln());
            }
            orthonormalize_columns(&mut g, k);
            let mean = q.iter().sum::<f64>() / k as f64;
            q.iter_mut().for_each(|x| *x -= mean);
            let c = Complex64::from_polar(1.0, -g.determinant().arg());
            for i in 0..k {
                g[(i, 0)] *= c;
            }
            check_gaps(&q, t, false)?;
            (q, g)
        }
    };
    let min_root = space.min_root(&q);
    if min_root < EPS_WALL {
        return Err(Error::WallCollision { time: t, min_root });
    }
    Ok((q, g))
}

fn check_gaps(q: &[f64], _t: f64, include_zero: bool) -> Result<()> {
    let mut gap = q
        .windows(2)
        .map(|w| w[0] - w[1])
        .fold(f64::INFINITY, f64::min);
    if include_zero {
        if let Some(last) = q.last() {
            gap = gap.min(*last);
        }
    }
    if gap < EPS_DEGENERATE {
        return Err(Error::Degenerate { gap });
    }
    Ok(())
}

/// Fills columns `from..` of `u` with an orthonormal basis of the complement
/// of the first `from` columns.
fn complete_unitary(u: &mut CMat, from: usize) {
    let m = u.nrows();
    let mut col = from;
    for e in 0..m {
        if col == m {
            break;
        }
        let mut v = nalgebra::DVector::<Complex64>::zeros(m);
        v[e] = real(1.0);
        for _ in 0..2 {
            for j in 0..col {
                let uj = u.column(j);
                let proj = uj.dotc(&v);
                v -= uj * proj;
            }
        }
        let norm = v.norm();
        if norm > 1e-6 {
            u.set_column(col, &(v / real(norm)));
            col += 1;
        }
    }
}

/// Fixes the residual `M` gauge by maximizing `-<m xi m^{-1}, reference>`
/// over the centralizer of `A` in `G_+`.
fn align_gauge(
    space: &SymmetricSpace,
    xi: &CMat,
    reference: &CMat,
    opts: &ProjectionOptions,
) -> CMat {
    let overlap = |x: &CMat| -linalg::pairing(x, reference);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut best = xi.clone();
    let mut best_val = overlap(xi);
    for start in 0..opts.gauge_starts {
        let mut cur = if start == 0 {
            xi.clone()
        } else {
            let mut z = linalg::zeros(space.matrix_size());
            for b in space.m_basis() {
                z += b * real(rand::Rng::random_range(&mut rng, -3.2..3.2));
            }
            let g = linalg::expm(&z);
            &g * xi * g.adjoint()
        };
        let mut val = overlap(&cur);
        let mut step = 0.5;
        for _ in 0..500 {
            let z = space.project_raw(&linalg::commutator(&cur, reference), Subspace::M);
            let gn = -linalg::pairing(&z, &z);
            if gn < 1e-28 {
                break;
            }
            let mut moved = false;
            for _ in 0..40 {
                let g = linalg::expm(&(&z * real(step)));
                let cand = &g * &cur * g.adjoint();
                let cval = overlap(&cand);
                if cval >= val + 1e-4 * step * gn {
                    cur = cand;
                    val = cval;
                    step *= 1.5;
                    moved = true;
                    break;
                }
                step *= 0.5;
            }
            if !moved {
                break;
            }
        }
        if val > best_val {
            best_val = val;
            best = cur;
        }
    }
    best
}
