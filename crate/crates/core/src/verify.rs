//! Invariant suites behind `verify-orbit` and `verify-all`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::coherent::{self, BasisSpec};
use crate::dynamics::{conservation_report, integrate, verlet_step};
use crate::error::Result;
use crate::finrep::{homomorphism_residuals, nonunitarity_witness, FinRepSpace};
use crate::orbit::{self, GroupElement, LieAlgebraElement, Tangent};
use crate::quantization::{self as quant, Chart, Section, SpectralProblem};
use crate::sampling::{self, random_group_element, random_state};
use crate::toda::TodaPhasePoint;

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    /// `None` for boolean checks (value 1 = pass).
    pub tolerance: Option<f64>,
    pub pass: bool,
}

impl Check {
    fn below(name: &str, value: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            value,
            tolerance: Some(tolerance),
            pass: value.is_finite() && value < tolerance,
        }
    }

    fn flag(name: &str, ok: bool) -> Self {
        Self {
            name: name.into(),
            value: if ok { 1.0 } else { 0.0 },
            tolerance: None,
            pass: ok,
        }
    }

    fn within(name: &str, value: f64, lo: f64, hi: f64) -> Self {
        Self {
            name: name.into(),
            value,
            tolerance: None,
            pass: value >= lo && value <= hi,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Suite {
    pub name: String,
    pub pass: bool,
    pub checks: Vec<Check>,
}

impl Suite {
    fn new(name: &str, checks: Vec<Check>) -> Self {
        Self {
            name: name.into(),
            pass: checks.iter().all(|c| c.pass),
            checks,
        }
    }
}

fn max_abs_diff(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
}

fn state_diff(s: &TodaPhasePoint, t: &TodaPhasePoint) -> f64 {
    max_abs_diff(s.a(), t.a()).max(max_abs_diff(s.b(), t.b()))
}

/// Trace conservation, second-order refinement and time reversibility.
pub fn dynamics_suite(n: usize, seed: u64) -> Result<Suite> {
    let mut rng = sampling::rng(seed);
    let s = random_state(n, &mut rng);
    let c0 = s.to_canonical();
    let c = s.trace_c();
    let coarse = conservation_report(&integrate(&c0, c, 1.0, 1e-2)?)?;
    let fine = conservation_report(&integrate(&c0, c, 1.0, 5e-3)?)?;
    let order = (coarse.energy_drift / fine.energy_drift).log2();

    let mut x = c0.clone();
    for _ in 0..1000 {
        verlet_step(&mut x, c, 1e-3)?;
    }
    for _ in 0..1000 {
        verlet_step(&mut x, c, -1e-3)?;
    }
    let back = max_abs_diff(&x.q, &c0.q).max(max_abs_diff(&x.p, &c0.p));
    Ok(Suite::new(
        "dynamics",
        vec![
            Check::below("trace_drift", fine.trace_power_drift[0], f64::MIN_POSITIVE),
            Check::within("energy_refinement_order", order, 1.7, f64::INFINITY),
            Check::below("time_reversal_error", back, 1e-9),
        ],
    ))
}

fn random_algebra<R: Rng>(n: usize, rng: &mut R) -> DMatrix<f64> {
    orbit::algebra_basis(n)
        .iter()
        .fold(DMatrix::zeros(n, n), |acc, b| acc + b * rng.gen_range(-1.0..1.0))
}

fn random_tangent<R: Rng>(n: usize, rng: &mut R) -> Tangent {
    Tangent {
        da: (0..n - 1).map(|_| rng.gen_range(-1.0..1.0)).collect(),
        dp: (0..n - 1).map(|_| rng.gen_range(-1.0..1.0)).collect(),
    }
}

/// Random quadratic polynomial in `(a, b)`.
pub fn random_quadratic<R: Rng>(n: usize, rng: &mut R) -> impl Fn(&[f64], &[f64]) -> f64 {
    let vars = 2 * n - 1;
    let lin: Vec<f64> = (0..vars).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let quad: Vec<f64> = (0..vars * vars).map(|_| rng.gen_range(-1.0..1.0)).collect();
    move |a: &[f64], b: &[f64]| {
        let x: Vec<f64> = a.iter().chain(b).copied().collect();
        let mut v = 0.0;
        for i in 0..vars {
            v += lin[i] * x[i];
            for j in 0..vars {
                v += quad[i * vars + j] * x[i] * x[j];
            }
        }
        v
    }
}

/// Coordinate action, orbit dimension, symplectic form, brackets and polarization.
pub fn orbit_suite(n: usize, seed: u64, samples: usize) -> Result<Suite> {
    let mut rng = sampling::rng(seed);
    let mut action_err: f64 = 0.0;
    let mut identity_err: f64 = 0.0;
    let mut compose_err: f64 = 0.0;
    let mut rank_ok = true;
    let mut kk_err: f64 = 0.0;
    let mut pullback_err: f64 = 0.0;
    let mut bracket_err: f64 = 0.0;
    let mut states = Vec::with_capacity(samples);
    for _ in 0..samples {
        let s = random_state(n, &mut rng);
        let g1 = random_group_element(n, &mut rng);
        let g2 = random_group_element(n, &mut rng);
        let closed = orbit::action_on_coordinates(&g1, &s)?;
        let dense = orbit::coadjoint_action(&g1, &s.lax_matrix())?.to_state()?;
        action_err = action_err.max(state_diff(&closed, &dense));
        let same = orbit::action_on_coordinates(&GroupElement::identity(n), &s)?;
        identity_err = identity_err.max(state_diff(&same, &s));
        let lhs = orbit::action_on_coordinates(&g1.compose(&g2), &s)?;
        let rhs = orbit::action_on_coordinates(&g1, &orbit::action_on_coordinates(&g2, &s)?)?;
        compose_err = compose_err.max(state_diff(&lhs, &rhs));
        rank_ok &= orbit::orbit_tangent_rank(&s) == 2 * (n - 1);

        let (l1, l2) = (random_algebra(n, &mut rng), random_algebra(n, &mut rng));
        let m = orbit::kk_form_matrix(&s, &l1, &l2);
        let c = orbit::kk_form_coords(
            &s,
            &orbit::tangent_from_algebra(&s, &l1),
            &orbit::tangent_from_algebra(&s, &l2),
        );
        kk_err = kk_err.max((m - c).abs() / m.abs().max(1.0));

        let (t1, t2) = (random_tangent(n, &mut rng), random_tangent(n, &mut rng));
        let before = orbit::kk_form_coords(&s, &t1, &t2);
        let after = orbit::kk_form_coords(&closed, &orbit::push_tangent(&g1, &t1), &orbit::push_tangent(&g1, &t2));
        pullback_err = pullback_err.max((before - after).abs() / before.abs().max(1.0));

        let sign = orbit::bracket_sign(&s);
        let f = random_quadratic(n, &mut rng);
        let h = random_quadratic(n, &mut rng);
        let adler = sign * orbit::poisson_bracket(&f, &h, &s);
        let omega = orbit::omega_bracket(&f, &h, &s);
        bracket_err = bracket_err.max((adler - omega).abs() / omega.abs().max(1.0));
        states.push(s);
    }
    let polar = orbit::verify_polarization(n, &states);
    let mut control = orbit::strictly_lower_basis(n);
    control.push(orbit::algebra_basis(n).pop().expect("n >= 2"));
    let negative = orbit::verify_polarization_of(n, &control, &states);
    Ok(Suite::new(
        "orbit",
        vec![
            Check::below("closed_form_vs_matrix_action", action_err, 1e-10),
            Check::below("identity_action", identity_err, 1e-10),
            Check::below("composition_action", compose_err, 1e-10),
            Check::flag("tangent_rank_2n_minus_2", rank_ok),
            Check::below("kk_matrix_vs_coords", kk_err, 1e-8),
            Check::below("kk_pullback_invariance", pullback_err, 1e-12),
            Check::below("adler_vs_omega_bracket", bracket_err, 1e-6),
            Check::flag("polarization_conditions", polar.all_pass()),
            Check::flag("negative_control_not_isotropic", !negative.isotropic),
        ],
    ))
}

/// Random Gaussian-in-log section with centers in `[−1, 1]` and widths in `[0.4, 1]`.
pub fn random_gaussian_section<R: Rng>(n: usize, rng: &mut R) -> Section {
    let center: Vec<f64> = (0..n - 1).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let width: Vec<f64> = (0..n - 1).map(|_| rng.gen_range(0.4..1.0)).collect();
    Section::gaussian(&center, &width)
}

/// Unitarity of the induced action, polarization identities, canonical
/// commutators and the one-dimensional spectral convergence study.
pub fn quantization_suite(n: usize, seed: u64) -> Result<Suite> {
    let mut rng = sampling::rng(seed);
    let nq = n.min(3);
    let mut defect: f64 = 0.0;
    for _ in 0..5 {
        let g = random_group_element(nq, &mut rng);
        for _ in 0..2 {
            let s = random_gaussian_section(nq, &mut rng);
            let norm = quant::weighted_inner_product(&s, &s)?.re;
            let gs = quant::act_on_section(&g, &s)?;
            let moved = quant::weighted_inner_product(&gs, &gs)?.re;
            defect = defect.max((moved - norm).abs() / norm);
        }
    }

    let s = random_state(n, &mut rng);
    let l = LieAlgebraElement::subdiagonal(&(0..n - 1).map(|_| rng.gen_range(-1.0..1.0)).collect::<Vec<_>>());
    let x_h = quant::polarization_field(&l, &s);
    let theta_on_polarization = quant::symplectic_potential(&s).apply(&x_h).abs();
    let y = random_tangent(n, &mut rng);
    let dh: f64 = (0..n - 1).map(|i| l.matrix()[(i + 1, i)] * y.da[i]).sum();
    let duality = (orbit::kk_form_coords(&s, &y, &x_h) - dh).abs();

    let ops = quant::physicist_operators(n);
    let q0: Vec<f64> = (0..n - 1).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let psi = |q: &[f64]| Complex64::new((-q.iter().map(|x| x * x).sum::<f64>()).exp(), 0.3 * q[0]);
    let mut comm_err: f64 = 0.0;
    for i in 0..n - 1 {
        for j in 0..n - 1 {
            let expected = if i == j { Complex64::i() * psi(&q0) } else { Complex64::new(0.0, 0.0) };
            comm_err = comm_err.max((ops.commutator(i, j, &psi, &q0) - expected).norm());
        }
    }

    let mut lowest = Vec::new();
    let mut worst_residual: f64 = 0.0;
    for grid in [500, 1000, 2000] {
        let sp = quant::solve_spectrum(&SpectralProblem::uniform(2, Chart::Q, -12.0, 4.0, grid), 3)?;
        worst_residual = sp.residuals.iter().cloned().fold(worst_residual, f64::max);
        lowest.push(sp.eigenvalues[0]);
    }
    let (order, _) = quant::richardson(lowest[0], lowest[1], lowest[2]);
    Ok(Suite::new(
        "quantization",
        vec![
            Check::below("unitarity_defect", defect, 1e-4),
            Check::below("potential_on_polarization", theta_on_polarization, 1e-15),
            Check::below("polarization_field_duality", duality, 1e-8),
            Check::below("canonical_commutator", comm_err, 1e-6),
            Check::below("eigen_residual", worst_residual, 1e-8),
            Check::within("richardson_order", order, 1.7, 2.3),
        ],
    ))
}

/// Reproducing property, kernel positivity and coherent-state equivalence.
pub fn coherent_suite(n: usize, seed: u64) -> Result<Suite> {
    let mut rng = sampling::rng(seed);
    let spec = BasisSpec::new(2, 12)?;
    let coeffs: Vec<f64> = (0..spec.dim()).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let points: Vec<Vec<f64>> = (0..20).map(|_| vec![rng.gen_range(0.2..5.0)]).collect();
    let repro = coherent::reproducing_check(&spec, &coeffs, &points)?;
    let gram = coherent::kernel_gram(&spec, &points)?;
    let min_eig = coherent::min_gram_eigenvalue(&gram);

    let nc = n.min(4);
    let spec_c = BasisSpec::new(nc, 3)?;
    let s1 = Section::basis(spec_c, (0..spec_c.dim()).map(|_| rng.gen_range(-1.0..1.0)).collect());
    let mut residual: f64 = 0.0;
    for _ in 0..10 {
        let g = random_group_element(nc, &mut rng);
        let xs: Vec<TodaPhasePoint> = (0..5).map(|_| random_state(nc, &mut rng)).collect();
        residual = residual.max(coherent::group_coherent_check(&g, &xs, &s1)?);
    }
    Ok(Suite::new(
        "coherent",
        vec![
            Check::below("reproducing_error", repro.max_error, 1e-8),
            Check::flag("kernel_gram_psd", min_eig >= -1e-10),
            Check::below("group_coherent_residual", residual, 1e-6),
        ],
    ))
}

/// Homomorphism residuals, determinant identity and the non-unitarity witness.
pub fn finrep_suite(n: usize, seed: u64, pairs: usize) -> Result<Suite> {
    let mut rng = sampling::rng(seed);
    let nf = n.min(4);
    let mut residual: f64 = 0.0;
    let mut det_err: f64 = 0.0;
    for i in 0..pairs {
        let space = FinRepSpace::new(nf, i % 4, false)?;
        let g1 = random_group_element(nf, &mut rng);
        let g2 = random_group_element(nf, &mut rng);
        residual = residual.max(homomorphism_residuals(&g1, &g2, &space)?.1);
        let rho = crate::finrep::rep_matrix(&g1, &space)?;
        let product: f64 = rho.matrix.diagonal().iter().product();
        det_err = det_err.max((rho.determinant() - product).abs() / product.abs());
    }
    let witness = nonunitarity_witness(&FinRepSpace::new(nf, 1, false)?)?;
    Ok(Suite::new(
        "finrep",
        vec![
            Check::below("homomorphism_relative_residual", residual, 1e-12),
            Check::below("determinant_identity", det_err, 1e-12),
            Check::within("witness_ratio_deviation", (witness.ratio - 1.0).abs(), 0.1, f64::INFINITY),
        ],
    ))
}
