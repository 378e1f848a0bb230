//! Riesz means at heights beyond what fits in memory: a segmented sieve
//! streams `φ(n)` and every requested height accumulates its own sum.

use super::{check_k, factorial, finish_mean, term_dd, term_f64, PrecisionMode, RieszMean, DD_TERM_REL};
use crate::error::{Error, Result};
use crate::numeric::{CompensatedSum, DoubleDouble, ExtendedSum, NaiveSum};

const SEGMENT: u64 = 1 << 18;

/// Heights above this would overflow the u32 factor bookkeeping.
const STREAM_LIMIT: f64 = 4.0e9;

fn base_primes(limit: u64) -> Vec<u64> {
    let limit = limit as usize;
    let mut composite = vec![false; limit + 1];
    let mut primes = Vec::new();
    for i in 2..=limit {
        if !composite[i] {
            primes.push(i as u64);
            let mut j = i * i;
            while j <= limit {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}

/// Fill `phi[..]` with `φ(lo..lo + phi.len())`.
fn sieve_segment(lo: u64, primes: &[u64], phi: &mut [u32], found: &mut [u32]) {
    let hi = lo + phi.len() as u64;
    phi.fill(1);
    found.fill(1);
    for &p in primes {
        if p * p >= hi {
            break;
        }
        let mut pk = p;
        let mut first_power = true;
        while pk < hi {
            let start = lo.div_ceil(pk) * pk;
            let mut j = (start - lo) as usize;
            let step = pk as usize;
            let (mul_phi, mul_found) = if first_power { (p - 1, p) } else { (p, p) };
            while j < phi.len() {
                phi[j] *= mul_phi as u32;
                found[j] *= mul_found as u32;
                j += step;
            }
            first_power = false;
            match pk.checked_mul(p) {
                Some(next) => pk = next,
                None => break,
            }
        }
    }
    for (i, (ph, f)) in phi.iter_mut().zip(found.iter()).enumerate() {
        let n = lo + i as u64;
        // what remains after the small primes is 1 or a single large prime
        let rest = (n / *f as u64) as u32;
        if rest > 1 {
            *ph *= rest - 1;
        }
    }
}

enum Accumulator {
    Exact(u128),
    Standard(NaiveSum, f64),
    Compensated(CompensatedSum, f64),
    Extended(ExtendedSum),
}

/// `F_{k-1}(x)` for every `x` in `targets`, without storing a full table.
///
/// One pass up to `max(targets)`; each `n` contributes to every target
/// `x >= n`. Results come back in the order of `targets`.
pub fn riesz_means_streaming(targets: &[f64], k: u32, precision: PrecisionMode) -> Result<Vec<RieszMean>> {
    check_k(k)?;
    if targets.is_empty() {
        return Ok(Vec::new());
    }
    for &x in targets {
        if !(x >= 1.0) || !(x < STREAM_LIMIT) {
            return Err(Error::domain(format!(
                "streaming heights must lie in [1, {STREAM_LIMIT:e}), got {x}"
            )));
        }
    }
    let mut order: Vec<usize> = (0..targets.len()).collect();
    order.sort_by(|&a, &b| targets[a].total_cmp(&targets[b]));
    let xs: Vec<f64> = order.iter().map(|&i| targets[i]).collect();
    let floors: Vec<u64> = xs.iter().map(|x| x.floor() as u64).collect();
    let log_xs: Vec<DoubleDouble> = if precision == PrecisionMode::Extended {
        xs.iter().map(|&x| DoubleDouble::from_f64(x).ln()).collect()
    } else {
        Vec::new()
    };
    let n_top = *floors.last().unwrap();

    let mut accs: Vec<Accumulator> = xs
        .iter()
        .map(|_| match (k, precision) {
            (1, _) => Accumulator::Exact(0),
            (_, PrecisionMode::Standard) => Accumulator::Standard(NaiveSum::default(), 0.0),
            (_, PrecisionMode::Compensated) => Accumulator::Compensated(CompensatedSum::new(), 0.0),
            (_, PrecisionMode::Extended) => Accumulator::Extended(ExtendedSum::default()),
        })
        .collect();

    let primes = base_primes((n_top as f64).sqrt() as u64 + 1);
    let inv_fact = 1.0 / factorial(k - 1);
    let inv_fact_dd = DoubleDouble::ONE / DoubleDouble::from_f64(factorial(k - 1));
    let mut phi = vec![0u32; SEGMENT as usize];
    let mut found = vec![0u32; SEGMENT as usize];
    let mut first_active = 0usize;

    let mut lo = 1u64;
    while lo <= n_top {
        let hi = (lo + SEGMENT).min(n_top + 1);
        let len = (hi - lo) as usize;
        sieve_segment(lo, &primes, &mut phi[..len], &mut found[..len]);
        for (offset, &ph) in phi[..len].iter().enumerate() {
            let n = lo + offset as u64;
            while floors[first_active] < n {
                first_active += 1;
            }
            let log_n_dd = if precision == PrecisionMode::Extended && k > 1 {
                DoubleDouble::from_f64(n as f64).ln()
            } else {
                DoubleDouble::ZERO
            };
            for (i, acc) in accs.iter_mut().enumerate().skip(first_active) {
                match acc {
                    Accumulator::Exact(s) => *s += ph as u128,
                    Accumulator::Standard(s, e) => {
                        let (t, d) = term_f64(ph as f64, (xs[i] / n as f64).ln(), k, inv_fact);
                        s.add(t);
                        *e += d;
                    }
                    Accumulator::Compensated(s, e) => {
                        let (t, d) = term_f64(ph as f64, (xs[i] / n as f64).ln(), k, inv_fact);
                        s.add(t);
                        *e += d;
                    }
                    Accumulator::Extended(s) => {
                        s.add(term_dd(ph, log_xs[i] - log_n_dd, k, inv_fact_dd));
                    }
                }
            }
        }
        lo = hi;
    }

    let mut out = vec![None; targets.len()];
    for (sorted_idx, acc) in accs.into_iter().enumerate() {
        let x = xs[sorted_idx];
        let mean = match acc {
            Accumulator::Exact(s) => {
                let dd = DoubleDouble::from_u128(s);
                RieszMean {
                    value: dd.to_f64(),
                    value_dd: dd,
                    est_rounding: 0.0,
                    cancellation_warning: false,
                }
            }
            Accumulator::Standard(s, e) => finish_mean(
                DoubleDouble::from_f64(s.value()),
                s.rounding_bound() + e * (1.0 + 1e-10),
                x,
            ),
            Accumulator::Compensated(s, e) => finish_mean(
                DoubleDouble::from_f64(s.value()),
                s.rounding_bound() + e * (1.0 + 1e-10),
                x,
            ),
            Accumulator::Extended(s) => {
                let est = s.rounding_bound() + DD_TERM_REL * k as f64 * s.abs_sum();
                finish_mean(s.value(), est, x)
            }
        };
        out[order[sorted_idx]] = Some(mean);
    }
    Ok(out.into_iter().map(|m| m.expect("every target is filled")).collect())
}
