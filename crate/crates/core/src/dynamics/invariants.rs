use std::fmt;

use crate::algebra::{LieElement, SpaceSpec, SymmetricSpace};
use crate::error::{Error, Result};
use crate::linalg::{self, cplx, real, CMat};
use crate::orbits::build_slice_point;

use super::phase::PhasePoint;

/// An invariant polynomial on the algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InvariantClass {
    /// `tr(X^k)/k`, invariant under `G`. On `su(m,n)` odd powers have purely
    /// imaginary trace, so the imaginary part is used there.
    TracePower(u32),
    /// `tr((A B D B^*)^k)` in the block form of `su(m,n)`, invariant under `G_+`.
    BlockInvariant(u32),
}

impl InvariantClass {
    pub fn k(&self) -> u32 {
        match *self {
            InvariantClass::TracePower(k) | InvariantClass::BlockInvariant(k) => k,
        }
    }

    pub fn is_g_invariant(&self) -> bool {
        matches!(self, InvariantClass::TracePower(_))
    }

    pub fn validate(&self, space: SpaceSpec) -> Result<()> {
        if self.k() == 0 {
            return Err(Error::InvalidArgument(
                "invariant degree must be >= 1".into(),
            ));
        }
        if let (InvariantClass::BlockInvariant(_), SpaceSpec::SlKc { .. }) = (self, space) {
            return Err(Error::Unsupported(
                "block invariants are defined for su(m,n) only".into(),
            ));
        }
        Ok(())
    }
}

impl fmt::Display for InvariantClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InvariantClass::TracePower(k) => write!(f, "trace_power({k})"),
            InvariantClass::BlockInvariant(k) => write!(f, "block_invariant({k})"),
        }
    }
}

/// An invariant composed with `K(x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvariantSpec {
    pub class: InvariantClass,
    pub x: f64,
}

impl InvariantSpec {
    pub fn new(class: InvariantClass, x: f64) -> Self {
        Self { class, x }
    }
}

fn odd_su(space: &SymmetricSpace, k: u32) -> bool {
    matches!(space.spec(), SpaceSpec::SuMn { .. }) && k % 2 == 1
}

fn mat_pow(x: &CMat, k: u32) -> CMat {
    let mut out = linalg::identity(x.nrows());
    for _ in 0..k {
        out = &out * x;
    }
    out
}

struct Blocks {
    a: CMat,
    b: CMat,
    d: CMat,
    p: CMat,
}

fn blocks(x: &CMat, m: usize, n: usize) -> Blocks {
    let a = x.view((0, 0), (m, m)).clone_owned();
    let b = x.view((0, m), (m, n)).clone_owned();
    let d = x.view((m, m), (n, n)).clone_owned();
    let p = &a * &b * &d * b.adjoint();
    Blocks { a, b, d, p }
}

fn su_dims(space: &SymmetricSpace) -> Result<(usize, usize)> {
    match space.spec() {
        SpaceSpec::SuMn { m, n } => Ok((m, n)),
        other => Err(Error::Unsupported(format!(
            "block invariants are not defined on {other}"
        ))),
    }
}

/// Value of the invariant at a matrix of the algebra.
pub fn evaluate(space: &SymmetricSpace, class: InvariantClass, x: &CMat) -> Result<f64> {
    class.validate(space.spec())?;
    let k = class.k();
    match class {
        InvariantClass::TracePower(_) => {
            let t = linalg::trace(&mat_pow(x, k)) / real(k as f64);
            Ok(if odd_su(space, k) { t.im } else { t.re })
        }
        InvariantClass::BlockInvariant(_) => {
            let (m, n) = su_dims(space)?;
            let bl = blocks(x, m, n);
            Ok(linalg::trace(&mat_pow(&bl.p, k)).re)
        }
    }
}

/// Gradient with respect to `<X, Y> = Re tr(XY)`, projected onto the algebra.
pub fn gradient_raw(space: &SymmetricSpace, class: InvariantClass, x: &CMat) -> Result<CMat> {
    class.validate(space.spec())?;
    let k = class.k();
    let z = match class {
        InvariantClass::TracePower(_) => {
            let pw = mat_pow(x, k - 1);
            if odd_su(space, k) {
                pw * cplx(0.0, -1.0)
            } else {
                pw
            }
        }
        InvariantClass::BlockInvariant(_) => {
            let (m, n) = su_dims(space)?;
            let Blocks { a, b, d, p } = blocks(x, m, n);
            let pk = mat_pow(&p, k - 1);
            let bd = &b * &d;
            let mut z = linalg::zeros(m + n);
            z.view_mut((0, 0), (m, m))
                .copy_from(&(&bd * b.adjoint() * &pk));
            z.view_mut((0, m), (m, n)).copy_from(&(&pk * &a * &bd));
            z.view_mut((m, 0), (n, m))
                .copy_from(&(&d * b.adjoint() * &pk * &a));
            z.view_mut((m, m), (n, n))
                .copy_from(&(b.adjoint() * &pk * &a * &b));
            z * real(k as f64)
        }
    };
    Ok(space.project_to_algebra(&z))
}

pub fn gradient(
    space: &SymmetricSpace,
    class: InvariantClass,
    x: &LieElement,
) -> Result<LieElement> {
    space.check_member(x.matrix())?;
    let g = gradient_raw(space, class, x.matrix())?;
    space.element(g)
}

/// `K(x) = J_- - x xi` at the unreduced slice point over `pt`, together with `xi`.
fn k_of_x(space: &SymmetricSpace, pt: &PhasePoint, xs: &[f64]) -> Result<(Vec<CMat>, CMat)> {
    let up = build_slice_point(space, pt.q(), pt.p(), pt.xi())?;
    let xi = up.xi.matrix().clone();
    let ks = xs
        .iter()
        .map(|&x| up.j_minus.matrix() - &xi * real(x))
        .collect();
    Ok((ks, xi))
}

/// `(A_+, A_-)` for `A = grad f (K)`.
fn split_gradient(space: &SymmetricSpace, class: InvariantClass, k: &CMat) -> Result<(CMat, CMat)> {
    Ok(space.split_raw(&gradient_raw(space, class, k)?))
}

fn xi_bracket(xi: &CMat, a: &CMat, b: &CMat) -> f64 {
    linalg::pairing(xi, &linalg::commutator(a, b))
}

/// The Poisson bracket of `f o K(x)` and `h o K(y)` on the constraint surface:
/// `x y <xi, [A^f_+, A^h_+]> - <xi, [A^f_-, A^h_-]>`.
pub fn bracket_formula(
    space: &SymmetricSpace,
    f: InvariantClass,
    x: f64,
    h: InvariantClass,
    y: f64,
    pt: &PhasePoint,
) -> Result<f64> {
    let (ks, xi) = k_of_x(space, pt, &[x, y])?;
    let (fp, fm) = split_gradient(space, f, &ks[0])?;
    let (hp, hm) = split_gradient(space, h, &ks[1])?;
    Ok(x * y * xi_bracket(&xi, &fp, &hp) - xi_bracket(&xi, &fm, &hm))
}

/// `|x <xi, [A^f_+(x), A^h_+(y)]> - y <xi, [A^f_-(x), A^h_-(y)]>|`, which
/// vanishes when `h` is `G`-invariant and `f` is `G_+`-invariant.
pub fn identity_413(
    space: &SymmetricSpace,
    f: InvariantClass,
    x: f64,
    h: InvariantClass,
    y: f64,
    pt: &PhasePoint,
) -> Result<f64> {
    if !h.is_g_invariant() {
        return Err(Error::InvalidArgument(format!("{h} is not G-invariant")));
    }
    let (ks, xi) = k_of_x(space, pt, &[x, y])?;
    let (fp, fm) = split_gradient(space, f, &ks[0])?;
    let (hp, hm) = split_gradient(space, h, &ks[1])?;
    Ok((x * xi_bracket(&xi, &fp, &hp) - y * xi_bracket(&xi, &fm, &hm)).abs())
}

/// `|y <xi, [A^f_+(x), A^h_+(y)]> - x <xi, [A^f_-(x), A^h_-(y)]>|` for two
/// `G`-invariant functions.
pub fn identity_416(
    space: &SymmetricSpace,
    f: InvariantClass,
    x: f64,
    h: InvariantClass,
    y: f64,
    pt: &PhasePoint,
) -> Result<f64> {
    for c in [f, h] {
        if !c.is_g_invariant() {
            return Err(Error::InvalidArgument(format!("{c} is not G-invariant")));
        }
    }
    let (ks, xi) = k_of_x(space, pt, &[x, y])?;
    let (fp, fm) = split_gradient(space, f, &ks[0])?;
    let (hp, hm) = split_gradient(space, h, &ks[1])?;
    Ok((y * xi_bracket(&xi, &fp, &hp) - x * xi_bracket(&xi, &fm, &hm)).abs())
}

/// `f(L(x))` at a phase point.
pub fn invariant_value(
    space: &SymmetricSpace,
    spec: &InvariantSpec,
    pt: &PhasePoint,
) -> Result<f64> {
    let l = super::phase::lax(space, pt, spec.x)?;
    evaluate(space, spec.class, l.matrix())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Subspace;
    use crate::dynamics::phase::PhasePoint;
    use crate::orbits::random_slice_spin;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_element(space: &SymmetricSpace, rng: &mut ChaCha8Rng) -> CMat {
        let z = linalg::random_complex_matrix(space.matrix_size(), space.matrix_size(), rng);
        space.project_to_algebra(&z)
    }

    fn random_pt(space: &SymmetricSpace, rng: &mut ChaCha8Rng) -> PhasePoint {
        let r = space.coord_len();
        let q: Vec<f64> = (0..r)
            .map(|j| 0.5 * (r - j) as f64 + rng.random_range(0.0..0.3))
            .collect();
        let p: Vec<f64> = (0..r).map(|_| rng.random_range(-1.0..1.0)).collect();
        let xi = random_slice_spin(space, 0.8, rng);
        PhasePoint::new(space, q.into(), p.into(), xi).unwrap()
    }

    fn classes() -> Vec<InvariantClass> {
        vec![
            InvariantClass::TracePower(1),
            InvariantClass::TracePower(2),
            InvariantClass::TracePower(3),
            InvariantClass::TracePower(4),
            InvariantClass::BlockInvariant(1),
            InvariantClass::BlockInvariant(2),
            InvariantClass::BlockInvariant(3),
        ]
    }

    #[test]
    fn trace_power_two_gradient_is_identity() {
        let s = SymmetricSpace::build(SpaceSpec::SuMn { m: 3, n: 2 }).unwrap();
        let x = random_element(&s, &mut ChaCha8Rng::seed_from_u64(1));
        let g = gradient_raw(&s, InvariantClass::TracePower(2), &x).unwrap();
        assert!(linalg::max_abs(&(g - &x)) < 1e-14);
    }

    #[test]
    fn gradients_match_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for spec in [
            SpaceSpec::SuMn { m: 2, n: 2 },
            SpaceSpec::SuMn { m: 3, n: 1 },
            SpaceSpec::SlKc { k: 3 },
        ] {
            let s = SymmetricSpace::build(spec).unwrap();
            for class in classes() {
                if class.validate(spec).is_err() {
                    continue;
                }
                for _ in 0..5 {
                    let x = random_element(&s, &mut rng) * real(0.7);
                    let y = random_element(&s, &mut rng);
                    let h = 1e-5;
                    let fd = (evaluate(&s, class, &(&x + &y * real(h))).unwrap()
                        - evaluate(&s, class, &(&x - &y * real(h))).unwrap())
                        / (2.0 * h);
                    let g = gradient_raw(&s, class, &x).unwrap();
                    let an = linalg::pairing(&y, &g);
                    assert!((fd - an).abs() < 1e-7, "{spec} {class} {fd} {an}");
                }
            }
        }
    }

    #[test]
    fn invariance_conditions() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let s = SymmetricSpace::build(SpaceSpec::SuMn { m: 3, n: 2 }).unwrap();
        for class in classes() {
            let x = random_element(&s, &mut rng);
            let g = gradient_raw(&s, class, &x).unwrap();
            let c = linalg::commutator(&x, &g);
            if class.is_g_invariant() {
                assert!(linalg::max_abs(&c) < 1e-11, "{class}");
            } else {
                let (plus, _) = s.split_raw(&c);
                assert!(linalg::max_abs(&plus) < 1e-11, "{class}");
            }
        }
    }

    #[test]
    fn block_invariants_are_real_and_g_plus_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let s = SymmetricSpace::build(SpaceSpec::SuMn { m: 3, n: 2 }).unwrap();
        let x = random_element(&s, &mut rng);
        let g = crate::orbits::random_g_plus(&s, &mut rng);
        let y = &g * &x * g.adjoint();
        for k in 1..=3 {
            let bl = blocks(&x, 3, 2);
            assert!(linalg::trace(&mat_pow(&bl.p, k)).im.abs() < 1e-12);
            let a = evaluate(&s, InvariantClass::BlockInvariant(k), &x).unwrap();
            let b = evaluate(&s, InvariantClass::BlockInvariant(k), &y).unwrap();
            assert!((a - b).abs() < 1e-10 * a.abs().max(1.0));
        }
        let sl = SymmetricSpace::build(SpaceSpec::SlKc { k: 2 }).unwrap();
        assert!(evaluate(&sl, InvariantClass::BlockInvariant(1), &linalg::zeros(2)).is_err());
    }

    #[test]
    fn invariant_brackets_vanish_and_identities_hold() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let g_inv = [
            InvariantClass::TracePower(2),
            InvariantClass::TracePower(3),
            InvariantClass::TracePower(4),
        ];
        for spec in [
            SpaceSpec::SuMn { m: 2, n: 1 },
            SpaceSpec::SuMn { m: 2, n: 2 },
            SpaceSpec::SuMn { m: 3, n: 2 },
        ] {
            let s = SymmetricSpace::build(spec).unwrap();
            for _ in 0..10 {
                let pt = random_pt(&s, &mut rng);
                let x = rng.random_range(-2.0..2.0);
                let y = rng.random_range(-2.0..2.0);
                for f in g_inv {
                    for h in g_inv {
                        assert!(bracket_formula(&s, f, x, h, y, &pt).unwrap().abs() < 1e-10);
                        assert!(identity_413(&s, f, x, h, y, &pt).unwrap() < 1e-10);
                        assert!(identity_416(&s, f, x, h, y, &pt).unwrap() < 1e-10);
                    }
                }
                for f in [
                    InvariantClass::BlockInvariant(1),
                    InvariantClass::BlockInvariant(2),
                ] {
                    for h in g_inv {
                        for yy in [1.0, -1.0] {
                            assert!(bracket_formula(&s, f, x, h, yy, &pt).unwrap().abs() < 1e-10);
                        }
                        assert!(identity_413(&s, f, x, h, y, &pt).unwrap() < 1e-10);
                    }
                }
            }
        }
    }

    #[test]
    fn identity_413_without_spin_is_zero() {
        let s = SymmetricSpace::build(SpaceSpec::SuMn { m: 2, n: 2 }).unwrap();
        let pt = PhasePoint::new(
            &s,
            vec![1.0, 0.4].into(),
            vec![0.2, 0.1].into(),
            crate::orbits::SpinPoint::zero(&s),
        )
        .unwrap();
        let r = identity_413(
            &s,
            InvariantClass::BlockInvariant(1),
            0.7,
            InvariantClass::TracePower(3),
            -1.3,
            &pt,
        )
        .unwrap();
        assert_eq!(r, 0.0);
    }

    #[test]
    fn block_invariants_do_not_commute_generically() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let s = SymmetricSpace::build(SpaceSpec::SuMn { m: 2, n: 2 }).unwrap();
        let mut best: f64 = 0.0;
        for _ in 0..20 {
            let pt = random_pt(&s, &mut rng);
            let x = rng.random_range(-2.0..2.0);
            let y = rng.random_range(-2.0..2.0);
            let v = bracket_formula(
                &s,
                InvariantClass::BlockInvariant(1),
                x,
                InvariantClass::BlockInvariant(2),
                y,
                &pt,
            )
            .unwrap();
            best = best.max(v.abs());
        }
        assert!(best > 1e-4, "{best}");
    }

    #[test]
    fn k_of_one_is_the_lax_matrix() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let s = SymmetricSpace::build(SpaceSpec::SuMn { m: 3, n: 1 }).unwrap();
        let pt = random_pt(&s, &mut rng);
        let (ks, _) = k_of_x(&s, &pt, &[1.0, 0.0]).unwrap();
        let l1 = crate::dynamics::phase::lax(&s, &pt, 1.0).unwrap();
        assert!(linalg::max_abs(&(&ks[0] - l1.matrix())) < 1e-14);
        assert!(linalg::max_abs(&s.project_raw(&ks[1], Subspace::M)) < 1e-14);
    }
}
