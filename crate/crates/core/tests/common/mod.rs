//! Naive double-loop references, written directly from the estimator
//! definitions with no shared code from the library beyond shape evaluation.

#![allow(dead_code, clippy::needless_range_loop)]

use rand::Rng;
use rand_distr::StandardNormal;
use volvol::rng;
use volvol::sim::{simulate, ModelSpec, SimGrid};
use volvol::Tau2Fn;

pub struct Naive {
    pub n: usize,
    pub k: usize,
    pub s2: Vec<f64>,
    pub s4: Vec<f64>,
    pub tau2: Vec<f64>,
    pub alpha2: Vec<f64>,
    /// Absolute size of the terms entering each `tau2[i]`.
    pub tau2_scale: Vec<f64>,
    pub alpha2_scale: Vec<f64>,
}

fn inc(x: &[f64], j: usize) -> f64 {
    x[j] - x[j - 1]
}

impl Naive {
    pub fn new(x: &[f64], k: usize) -> Self {
        let n = x.len() - 1;
        let (nf, kf) = (n as f64, k as f64);
        let mut s2 = Vec::new();
        let mut s4 = Vec::new();
        let mut p8 = Vec::new();
        for i in 0..=n - k {
            let (mut a, mut b, mut c) = (0.0, 0.0, 0.0);
            for j in 1..=k {
                let d = inc(x, i + j);
                a += d * d;
                b += d.powi(4);
                c += d.powi(8);
            }
            s2.push(nf / kf * a);
            s4.push(nf * nf / (3.0 * kf) * b);
            p8.push(c);
        }
        let mut tau2 = Vec::new();
        let mut tau2_scale = Vec::new();
        let mut alpha2 = Vec::new();
        let mut alpha2_scale = Vec::new();
        for i in 0..=n - 2 * k {
            let d = s2[i + k] - s2[i];
            let first = 1.5 * nf / kf * d * d;
            let second = 6.0 * nf / (kf * kf) * s4[i];
            let t = first - second;
            tau2.push(t);
            tau2_scale.push(first.abs() + second.abs());
            let a = 453.0 / 280.0 * nf * nf / (kf * kf) * d.powi(4);
            let b = 486.0 / 35.0 * nf / (kf * kf) * t * s4[i];
            let c = 346.0 / 1225.0 * nf.powi(6) / kf.powi(5) * p8[i];
            alpha2.push(a - b - c);
            alpha2_scale.push(a.abs() + 486.0 / 35.0 * nf / (kf * kf) * (first + second) * s4[i] + c.abs());
        }
        Self {
            n,
            k,
            s2,
            s4,
            tau2,
            alpha2,
            tau2_scale,
            alpha2_scale,
        }
    }

    /// `(V, sum of |terms|)` at `t = m/n`.
    pub fn v_hat(&self, m: usize) -> (f64, f64) {
        if m < 2 * self.k {
            return (0.0, 0.0);
        }
        let nf = self.n as f64;
        let (mut v, mut s) = (0.0, 0.0);
        for i in 0..=m - 2 * self.k {
            v += self.tau2[i];
            s += self.tau2_scale[i];
        }
        (v / nf, s / nf)
    }

    pub fn uncorrected(&self, m: usize) -> f64 {
        let (nf, kf) = (self.n as f64, self.k as f64);
        let mut v = 0.0;
        for i in 0..=m - 2 * self.k {
            let d = self.s2[i + self.k] - self.s2[i];
            v += 1.5 * nf / kf * d * d;
        }
        v / nf
    }

    /// `(g1, g2, g3)` at `t = 1` with the magnitude of `g2`'s terms.
    pub fn g(&self) -> ([f64; 3], f64) {
        let (n, k) = (self.n, self.k);
        let (nf, kf) = (n as f64, k as f64);
        let mut g1 = 0.0;
        for i in 1..=n - k {
            g1 += self.s4[i] * self.s4[i];
        }
        let (mut g2, mut g2s, mut g3) = (0.0, 0.0, 0.0);
        for i in 1..=n - 2 * k {
            g2 += self.tau2[i] * self.s4[i];
            g2s += self.tau2_scale[i] * self.s4[i];
            let d = self.s2[i + k] - self.s2[i];
            g3 += nf * nf / (kf * kf) * d.powi(4);
        }
        ([g1 / nf, g2 / nf, g3 / nf], g2s / nf)
    }

    /// `(C, T, magnitude)` from the G statistics.
    pub fn c_t(&self) -> (f64, f64, f64) {
        let ([g1, g2, g3], g2s) = self.g();
        let (nf, kf) = (self.n as f64, self.k as f64);
        let a = nf / (kf * kf);
        let b = nf * nf / kf.powi(4);
        let c = 453.0 / 280.0 * g3 - 486.0 / 35.0 * a * g2 - 1038.0 / 35.0 * b * g1;
        let t = 0.75 * g3 - 12.0 * a * g2 - 36.0 * b * g1;
        let scale = 453.0 / 280.0 * g3 + 486.0 / 35.0 * a * g2s + 1038.0 / 35.0 * b * g1;
        (c, t, scale)
    }

    /// `(N path, magnitude path)` for `m = 0..=n`.
    pub fn n_hat(&self, x: &[f64], f: &Tau2Fn) -> (Vec<f64>, Vec<f64>) {
        let (n, k) = (self.n, self.k);
        let nf = n as f64;
        let fv: Vec<f64> = (0..=n - k).map(|i| f.eval(i as f64 / nf, x[i], self.s2[i])).collect();
        let mut d = 0.0;
        for v in &fv {
            d += v * v;
        }
        d /= nf;
        let (mut c, mut cs) = (0.0, 0.0);
        for i in 0..=n - 2 * k {
            c += self.tau2[i] * fv[i];
            cs += self.tau2_scale[i] * fv[i].abs();
        }
        c /= nf;
        cs /= nf;
        let mut out = Vec::new();
        let mut scale = Vec::new();
        for m in 0..=n {
            let mut b = 0.0;
            if m >= k {
                for v in &fv[..=m - k] {
                    b += v;
                }
            }
            b /= nf;
            let (v, vs) = self.v_hat(m);
            out.push(v - b * c / d);
            scale.push(vs + b.abs() * cs / d);
        }
        (out, scale)
    }
}

pub fn close(a: f64, b: f64, scale: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * scale.abs().max(f64::MIN_POSITIVE)
}

/// Random test path number `id`: simulated SV paths, Gaussian walks with
/// random volatility, and walks with occasional jumps.
pub fn random_path(id: u64) -> (Vec<f64>, usize) {
    let mut r = rng::stream(0x0AC1E, &[id]);
    let n = r.random_range(64..=2000usize);
    let kmax = n / 4;
    let k = r.random_range(2..=kmax.min(3 * (n as f64).sqrt() as usize).max(2));
    let x = match id % 3 {
        0 => {
            let spec = ModelSpec::heston_reference().with_rho(r.random_range(-0.9..0.9));
            simulate(&spec, &SimGrid::new(n).with_substeps(2), r.random())
                .unwrap()
                .x
        }
        1 => {
            let sigma: f64 = r.random_range(1e-3..10.0);
            let mut x = vec![r.random_range(-5.0..5.0)];
            for _ in 0..n {
                let z: f64 = r.sample(StandardNormal);
                x.push(x.last().unwrap() + sigma * z / (n as f64).sqrt());
            }
            x
        }
        _ => {
            let mut x = vec![0.0];
            for _ in 0..n {
                let z: f64 = r.sample(StandardNormal);
                let jump = if r.random::<f64>() < 0.01 {
                    r.random_range(-1.0..1.0)
                } else {
                    0.0
                };
                x.push(x.last().unwrap() + 0.3 * z / (n as f64).sqrt() + jump);
            }
            x
        }
    };
    (x, k)
}

/// Compares every optimized quantity on `x` with the naive reference at
/// relative tolerance `rel`, scaled by the magnitude of the summed terms.
pub fn check_against_naive(x: &[f64], k: usize, rel: f64) -> Result<(), String> {
    use volvol::gof::{alpha2_series, bdc_hats, n_hat_path};
    use volvol::spot::{eighth_power_sums, EstimatorConfig, SpotSeries};
    use volvol::volvol::{c_hat, g_stats, t_hat, tau2_series, uncorrected_v_hat, v_hat, v_hat_path};
    use volvol::SampledPath;

    let naive = Naive::new(x, k);
    let n = naive.n;
    let spot = SpotSeries::with_window(x, k).map_err(|e| e.to_string())?;
    let cmp = |what: &str, i: usize, got: f64, want: f64, scale: f64| {
        if close(got, want, scale, rel) {
            Ok(())
        } else {
            Err(format!(
                "{what}[{i}] n={n} k={k}: got {got:e}, want {want:e} (scale {scale:e})"
            ))
        }
    };
    for i in 0..naive.s2.len() {
        cmp("s2", i, spot.s2[i], naive.s2[i], naive.s2[i])?;
        cmp("s4", i, spot.s4[i], naive.s4[i], naive.s4[i])?;
    }
    let tau2 = tau2_series(&spot);
    if tau2.len() != naive.tau2.len() {
        return Err(format!("tau2 length {} != {}", tau2.len(), naive.tau2.len()));
    }
    for i in 0..tau2.len() {
        cmp("tau2", i, tau2[i], naive.tau2[i], naive.tau2_scale[i])?;
    }
    let cfg = EstimatorConfig::with_k(k);
    let (v, vs) = naive.v_hat(n);
    cmp("V", 0, v_hat(&spot, &cfg).map_err(|e| e.to_string())?, v, vs)?;
    let u = naive.uncorrected(n);
    cmp(
        "V_uncorrected",
        0,
        uncorrected_v_hat(&spot, &cfg).map_err(|e| e.to_string())?,
        u,
        u,
    )?;
    let vp = v_hat_path(&tau2, n, k);
    for m in (0..=n).step_by(7).chain([n]) {
        let (v, vs) = naive.v_hat(m);
        cmp("V_path", m, vp[m], v, vs)?;
    }
    let g = g_stats(&spot, &cfg).map_err(|e| e.to_string())?;
    let ([g1, g2, g3], g2s) = naive.g();
    cmp("G1", 0, g.g1, g1, g1)?;
    cmp("G2", 0, g.g2, g2, g2s)?;
    cmp("G3", 0, g.g3, g3, g3)?;
    let (c, t, cs) = naive.c_t();
    cmp("C_hat", 0, c_hat(&g, n, k), c, cs)?;
    cmp("T_hat", 0, t_hat(&g, n, k), t, cs)?;
    let p8 = eighth_power_sums(x, k);
    let a2 = alpha2_series(&spot, &tau2, &p8);
    for i in 0..a2.len() {
        cmp("alpha2", i, a2[i], naive.alpha2[i], naive.alpha2_scale[i])?;
    }
    let path = SampledPath::from_observations(x.to_vec()).map_err(|e| e.to_string())?;
    for f in [
        Tau2Fn::constant(),
        Tau2Fn::custom("1+v", |_, _, v| 1.0 + v),
        Tau2Fn::custom("2+sin", |s, x, _| 2.0 + (s + x).sin()),
    ] {
        let d = bdc_hats(&path, &spot, &tau2, &f, 1e-12).map_err(|e| e.to_string())?;
        let np = n_hat_path(&vp, &d.b_path, d.d_hat, d.c_hat_f);
        let (want, scale) = naive.n_hat(x, &f);
        for m in 0..=n {
            cmp("N_hat", m, np[m], want[m], scale[m])?;
        }
    }
    Ok(())
}

/// Linear identities between the estimator constants, in exact rational
/// arithmetic. Each entry is `(description, holds)`.
pub fn coefficient_identities() -> Vec<(String, bool)> {
    use num_rational::Ratio;
    use volvol::coefficients::*;

    let q = |f: Frac| Ratio::new(f.num, f.den);
    let r = |a: i64, b: i64| Ratio::new(a, b);
    let zero = Ratio::from_integer(0);
    let [g_s8, g_s4t2, g_t4] = G3_LIMIT.map(q);
    let [a_s8, a_s4t2, a_t4] = ALPHA2.map(q);
    let checks = [
        (
            "453/280 * 4/3 = 151/70",
            q(C_G3) * g_t4,
            a_t4,
            r(453, 280) * r(4, 3) == r(151, 70),
        ),
        (
            "453/280 * 16 - 486/35 = 12",
            q(C_G3) * g_s4t2 - q(C_G2),
            a_s4t2,
            r(453, 280) * 16 - r(486, 35) == r(12, 1),
        ),
        (
            "453/280 * 48 - 1038/35 = 48",
            q(C_G3) * g_s8 - q(C_G1),
            a_s8,
            r(453, 280) * 48 - r(1038, 35) == r(48, 1),
        ),
        (
            "3/4 * 16 - 12 = 0",
            q(T_G3) * g_s4t2 - q(T_G2),
            zero,
            r(3, 4) * 16 - 12 == zero,
        ),
        (
            "3/4 * 48 - 36 = 0",
            q(T_G3) * g_s8 - q(T_G1),
            zero,
            r(3, 4) * 48 - 36 == zero,
        ),
        (
            "346 * 105 / 1225 = 1038/35",
            q(ALPHA_EIGHTH) * 105,
            q(C_G1),
            r(346 * 105, 1225) == r(1038, 35),
        ),
        ("3/4 * 4/3 = 1", q(T_G3) * g_t4, r(1, 1), r(3, 4) * r(4, 3) == r(1, 1)),
    ];
    checks
        .into_iter()
        .map(|(what, lhs, rhs, literal)| (what.to_string(), lhs == rhs && literal))
        .collect()
}
