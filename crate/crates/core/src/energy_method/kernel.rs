use std::f64::consts::PI;

use halton::Sequence;
use quadrature::double_exponential;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use statrs::function::gamma::gamma;

use crate::error::{invalid, Result};
use crate::stats::{linear_fit, mean_and_stderr};

/// Points used by the quasi-random rule for d ≥ 2, split over shifts.
pub const QMC_POINTS: usize = 1_000_000;
const QMC_SHIFTS: usize = 16;
const RELATIVE_TOLERANCE: f64 = 1e-7;
const QMC_BASES: [u8; 6] = [2, 3, 5, 7, 11, 13];

#[derive(Clone, Copy, Debug, Serialize)]
pub struct IntegralEstimate {
    pub value: f64,
    /// Zero for the one-dimensional quadrature, which is accurate to 1e-7
    /// relative; a standard error over random shifts otherwise.
    pub std_err: f64,
}

/// ∫_{ℝ^d} (1 + |v|²)^{-u} dv = π^{d/2} Γ(u − d/2) / Γ(u).
///
/// Extending the centered bound to all of ℝ^d and rescaling gives
/// integral ≤ this · p^d q^{d−2u} for every p, q, θ.
pub fn sharp_constant(d: usize, u: f64) -> Result<f64> {
    check_exponent(d, u)?;
    let half = d as f64 / 2.0;
    Ok(PI.powf(half) * gamma(u - half) / gamma(u))
}

fn check_exponent(d: usize, u: f64) -> Result<()> {
    if d == 0 {
        return invalid("dimension must be positive");
    }
    if u.is_nan() || u <= d as f64 / 2.0 {
        return invalid(format!("exponent u = {u} must exceed d/2 = {}", d as f64 / 2.0));
    }
    Ok(())
}

fn check_scales(p: f64, q: f64) -> Result<()> {
    if !(p > 0.0 && p <= 1.0 && q > 0.0 && q <= 1.0) {
        return invalid(format!("p = {p} and q = {q} must lie in (0, 1]"));
    }
    Ok(())
}

/// ∫_a^b f to a relative tolerance: a rough pass sets the absolute target.
fn integrate_relative<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, scale: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    let rough = double_exponential::integrate(&f, a, b, 1e-3 * scale * (b - a)).integral;
    let target = (RELATIVE_TOLERANCE * rough.abs()).max(f64::MIN_POSITIVE);
    double_exponential::integrate(&f, a, b, target).integral
}

/// ∫_{−p}^{p} (p − |τ|) (q² + (τ + θ)²)^{-u} dτ, split where the integrand
/// bends: at the kink τ = 0 and the peak τ = −θ.
fn one_dimensional(p: f64, q: f64, theta: f64, u: f64) -> f64 {
    let h = |tau: f64| (p - tau.abs()) * (q * q + (tau + theta) * (tau + theta)).powf(-u);
    let mut cuts = vec![-p, 0.0, p];
    if -theta > -p && -theta < p {
        cuts.push(-theta);
    }
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let scale = p * q.powf(-2.0 * u);
    cuts.windows(2).map(|w| integrate_relative(h, w[0], w[1], scale)).sum()
}

fn quasi_random(p: f64, q: f64, theta: &[f64], u: f64, seed: u64) -> IntegralEstimate {
    let d = theta.len();
    let per_shift = QMC_POINTS / QMC_SHIFTS;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let volume = p.powi(2 * d as i32);
    let estimates: Vec<f64> = (0..QMC_SHIFTS)
        .map(|_| {
            let shift: Vec<f64> = (0..2 * d).map(|_| rng.random::<f64>()).collect();
            let mut seqs: Vec<Sequence> = QMC_BASES[..2 * d].iter().map(|&b| Sequence::new(b)).collect();
            let mut sum = 0.0;
            let mut x = vec![0.0; 2 * d];
            for _ in 0..per_shift {
                for (k, s) in seqs.iter_mut().enumerate() {
                    x[k] = (s.next().unwrap() + shift[k]).fract() * p;
                }
                let r2: f64 = (0..d).map(|c| (x[c] - x[d + c] + theta[c]).powi(2)).sum();
                sum += (q * q + r2).powf(-u);
            }
            volume * sum / per_shift as f64
        })
        .collect();
    let (value, std_err) = mean_and_stderr(&estimates);
    IntegralEstimate { value, std_err }
}

/// ∫_{[0,p]^d} ∫_{[0,p]^d} (q² + |α − β + θ|²)^{-u} dα dβ with d = θ.len().
///
/// d = 1 reduces to a single integral against the triangle weight; larger d
/// uses a randomly shifted Halton rule (d ≤ 3).
pub fn pair_integral(p: f64, q: f64, theta: &[f64], u: f64, seed: u64) -> Result<IntegralEstimate> {
    check_exponent(theta.len(), u)?;
    check_scales(p, q)?;
    match theta.len() {
        1 => Ok(IntegralEstimate {
            value: one_dimensional(p, q, theta[0], u),
            std_err: 0.0,
        }),
        2 | 3 => Ok(quasi_random(p, q, theta, u, seed)),
        d => invalid(format!("pair integrals are implemented for d ≤ 3, not {d}")),
    }
}

/// The one-dimensional integral for any positive width and separation; the
/// expected kernel of two independent uniform offsets on [0, w] is this / w².
pub(crate) fn triangle_integral(w: f64, q: f64, theta: f64, u: f64) -> f64 {
    one_dimensional(w, q, theta, u)
}

/// p ∫_{−p}^{p} (q² + τ²)^{-u} dτ, the centered bound every shift stays under (d = 1).
pub fn centered_bound(p: f64, q: f64, u: f64) -> Result<f64> {
    check_exponent(1, u)?;
    check_scales(p, q)?;
    let h = |tau: f64| (q * q + tau * tau).powf(-u);
    Ok(2.0 * p * integrate_relative(h, 0.0, p, q.powf(-2.0 * u)))
}

#[derive(Clone, Debug, Serialize)]
pub struct KernelRow {
    pub p: f64,
    pub q: f64,
    pub theta: f64,
    pub integral: f64,
    pub std_err: f64,
    /// integral / (p^d q^{d−2u})
    pub ratio: f64,
    pub constant: f64,
    pub pass: bool,
}

/// One parameter point: integral, its normalized ratio, and the bound test.
/// The shift θ is applied along the first coordinate.
pub fn lemma_52_check(p: f64, q: f64, theta: f64, u: f64, d: usize, seed: u64) -> Result<KernelRow> {
    let constant = sharp_constant(d, u)?;
    let mut shift = vec![0.0; d];
    shift[0] = theta;
    let est = pair_integral(p, q, &shift, u, seed)?;
    let scale = p.powi(d as i32) * q.powf(d as f64 - 2.0 * u);
    let ratio = est.value / scale;
    let slack = 2.0 * est.std_err / scale + 1e-6 * constant;
    Ok(KernelRow {
        p,
        q,
        theta,
        integral: est.value,
        std_err: est.std_err,
        ratio,
        constant,
        pass: ratio <= constant + slack,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct KernelSweep {
    pub d: usize,
    pub u: f64,
    pub rows: Vec<KernelRow>,
    pub max_ratio: f64,
    pub constant: f64,
    /// Slope of ln(ratio) against ln(q), pooled over the sweep.
    pub slope: f64,
    pub bounded: bool,
    pub flat: bool,
}

/// Every (p, q, θ) combination; rows are ordered by p, then q, then θ.
pub fn lemma_52_sweep(d: usize, u: f64, ps: &[f64], qs: &[f64], thetas: &[f64], seed: u64) -> Result<KernelSweep> {
    use rayon::prelude::*;
    let constant = sharp_constant(d, u)?;
    let params: Vec<(f64, f64, f64)> = ps
        .iter()
        .flat_map(|&p| qs.iter().flat_map(move |&q| thetas.iter().map(move |&t| (p, q, t))))
        .collect();
    if params.len() < 2 {
        return invalid("a sweep needs at least two parameter points");
    }
    let rows = params
        .par_iter()
        .enumerate()
        .map(|(i, &(p, q, t))| lemma_52_check(p, q, t, u, d, crate::stats::mix_seed(seed, i as u64)))
        .collect::<Result<Vec<_>>>()?;
    let xs: Vec<f64> = rows.iter().map(|r| r.q.ln()).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.ratio.ln()).collect();
    let slope = linear_fit(&xs, &ys).map(|f| f.slope).unwrap_or(0.0);
    let max_ratio = rows.iter().map(|r| r.ratio).fold(0.0, f64::max);
    Ok(KernelSweep {
        d,
        u,
        bounded: rows.iter().all(|r| r.pass),
        flat: slope.abs() <= 0.1,
        max_ratio,
        constant,
        slope,
        rows,
    })
}

/// The dyadic ladder 2^{-1}, …, 2^{-k}.
pub fn dyadic_ladder(k: u32) -> Vec<f64> {
    (1..=k).map(|i| 0.5f64.powi(i as i32)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spot_value() {
        let r = lemma_52_check(1.0, 1.0, 0.0, 1.0, 1, 0).unwrap();
        assert!((r.integral - (PI / 2.0 - 2f64.ln())).abs() < 1e-9, "{}", r.integral);
        assert!(r.pass);
    }

    #[test]
    fn closed_form_u_one() {
        // 2[(p/q) atan(p/q) − ½ ln(1 + p²/q²)]
        for (p, q) in [(0.5, 0.5f64.powi(8)), (0.5f64.powi(8), 0.5), (0.25, 0.125)] {
            let r: f64 = p / q;
            let exact = 2.0 * (r * r.atan() - 0.5 * (1.0 + r * r).ln());
            let got = pair_integral(p, q, &[0.0], 1.0, 0).unwrap().value;
            assert!(((got - exact) / exact).abs() < 1e-6, "{p} {q}: {got} vs {exact}");
        }
    }

    #[test]
    fn constants() {
        assert!((sharp_constant(1, 1.0).unwrap() - PI).abs() < 1e-12);
        assert!((sharp_constant(2, 1.5).unwrap() - 2.0 * PI).abs() < 1e-12);
        assert!(sharp_constant(2, 1.0).is_err());
        assert!(pair_integral(0.5, 0.5, &[0.0], 0.5, 0).is_err());
    }

    #[test]
    fn shifts_stay_under_the_centered_bound() {
        for &theta in &[0.0, 0.1, -0.3, 2.0, 50.0] {
            let shifted = pair_integral(0.25, 0.01, &[theta], 0.75, 0).unwrap().value;
            let bound = centered_bound(0.25, 0.01, 0.75).unwrap();
            assert!(shifted <= bound * (1.0 + 1e-7), "{theta}");
        }
        let near = pair_integral(0.25, 0.01, &[0.6], 1.0, 0).unwrap().value;
        let far = pair_integral(0.25, 0.01, &[2.0], 1.0, 0).unwrap().value;
        assert!(far < near);
    }

    #[test]
    fn two_dimensional_agrees_with_product_limit() {
        // q large compared with p: integrand ≈ q^{-2u} constant
        let est = pair_integral(0.125, 1.0, &[0.0, 0.0], 1.5, 3).unwrap();
        let flat = 0.125f64.powi(4);
        assert!((est.value / flat - 1.0).abs() < 0.05, "{est:?}");
        assert!(est.std_err < 1e-3 * est.value);
    }
}
