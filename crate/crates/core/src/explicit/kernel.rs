//! The Perron kernel `(1/2πi) ∫_{c-iT}^{c+iT} a^s / s^k ds` and its limit
//! `1_{a>1} (ln a)^{k-1} / (k-1)!`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{integrate_panels, PanelSpec};

/// Which truncation bound accompanies the quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum KernelMode {
    /// `a` bounded away from 1: bound `5 a^c / (T^k |ln a|)`.
    FarFromOne,
    /// `1/2 ≤ a ≤ 2`: bound `1/T^{k-1} + 2^c c / T^k`, uniform as `a → 1`.
    NearOne,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct KernelResult {
    pub a: f64,
    pub c: f64,
    pub t: f64,
    pub k: u32,
    pub mode: KernelMode,
    /// Quadrature value of the line integral; its imaginary part is the
    /// asymmetry of the computed integrand and should be at rounding level.
    pub re: f64,
    pub im: f64,
    pub closed_form: f64,
    pub residual: f64,
    pub envelope: f64,
}

impl KernelResult {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    pub fn within_envelope(&self) -> bool {
        self.residual <= self.envelope
    }
}

pub fn kernel_closed_form(a: f64, k: u32) -> f64 {
    if a > 1.0 {
        let l = a.ln();
        l.powi(k as i32 - 1) / crate::totient::factorial(k - 1)
    } else {
        0.0
    }
}

pub fn kernel_envelope(a: f64, c: f64, t: f64, k: u32, mode: KernelMode) -> f64 {
    match mode {
        KernelMode::FarFromOne => 5.0 * a.powf(c) / (t.powi(k as i32) * a.ln().abs()),
        KernelMode::NearOne => 1.0 / t.powi(k as i32 - 1) + 2f64.powf(c) * c / t.powi(k as i32),
    }
}

pub fn kernel_integral(a: f64, c: f64, t: f64, k: u32, mode: KernelMode) -> Result<KernelResult> {
    kernel_integral_with(a, c, t, k, mode, PanelSpec::for_frequency(a.ln()))
}

pub fn kernel_integral_with(
    a: f64,
    c: f64,
    t: f64,
    k: u32,
    mode: KernelMode,
    panels: PanelSpec,
) -> Result<KernelResult> {
    if !(a > 0.0 && c > 0.0 && t > 0.0 && k >= 2) {
        return Err(Error::domain(format!(
            "kernel integral needs a > 0, c > 0, T > 0, k >= 2 (a = {a}, c = {c}, T = {t}, k = {k})"
        )));
    }
    match mode {
        KernelMode::FarFromOne if a == 1.0 => {
            return Err(Error::domain("the far-from-one bound needs a != 1"));
        }
        KernelMode::NearOne if !(0.5..=2.0).contains(&a) => {
            return Err(Error::domain(format!(
                "the near-one bound needs 1/2 <= a <= 2, got {a}"
            )));
        }
        _ => {}
    }
    let log_a = a.ln();
    // s = c + iu, ds = i du: (1/2π) ∫_{-T}^{T} a^{c+iu} (c+iu)^{-k} du
    let integrand = |u: f64| {
        let s = Complex64::new(c, u);
        Ok((s * log_a).exp() / s.powu(k))
    };
    let upper = integrate_panels(0.0, t, panels, integrand)?;
    let lower = integrate_panels(-t, 0.0, panels, integrand)?;
    let v = (upper + lower) / std::f64::consts::TAU;
    let closed_form = kernel_closed_form(a, k);
    Ok(KernelResult {
        a,
        c,
        t,
        k,
        mode,
        re: v.re,
        im: v.im,
        closed_form,
        residual: (v.re - closed_form).abs(),
        envelope: kernel_envelope(a, c, t, k, mode),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let r = kernel_integral(2.0, 1.0, 1e3, 2, KernelMode::FarFromOne).unwrap();
        assert!((r.closed_form - 2f64.ln()).abs() < 1e-15);
        assert!(r.within_envelope(), "{r:?}");
        assert!(r.envelope <= 5.0 * 2.0 / (1e6 * 2f64.ln()) * (1.0 + 1e-12));

        let r = kernel_integral(0.5, 1.0, 1e3, 2, KernelMode::FarFromOne).unwrap();
        assert_eq!(r.closed_form, 0.0);
        assert!(r.within_envelope(), "{r:?}");

        let r = kernel_integral(2.0, 1.0, 1e3, 3, KernelMode::FarFromOne).unwrap();
        assert!((r.closed_form - 2f64.ln().powi(2) / 2.0).abs() < 1e-15);
        assert!(r.within_envelope(), "{r:?}");
        assert!(r.im.abs() < 1e-14);
    }

    #[test]
    fn near_one_bound_is_uniform() {
        for a in [0.999, 1.0, 1.001, 1.5] {
            let r = kernel_integral(a, 1.5, 300.0, 2, KernelMode::NearOne).unwrap();
            assert!(r.within_envelope(), "{r:?}");
        }
        // a = 1 sits on the jump of the indicator; only the uniform bound applies
        assert!(kernel_integral(1.0, 1.0, 10.0, 2, KernelMode::FarFromOne).is_err());
        assert!(kernel_integral(3.0, 1.0, 10.0, 2, KernelMode::NearOne).is_err());
    }
}
