//! Radial profiles built from tabulated `(t, f)` samples.
//!
//! The samples are interpolated by a cubic spline in `t` with not-a-knot end
//! conditions, so the end curvature is read off the data rather than pinned to
//! zero (a natural spline's forced `f'' = 0` leaves an O(1) curvature error in
//! the first few segments, enough to push `f' + t f''` negative on profiles
//! with strong log curvature at the left edge). Outside the sampled range the
//! spline is extended linearly from the end knots (value and first derivative
//! continuous), so integrals past the last sample see a pure `f' = const`
//! tail; sample far enough out for the radii you integrate to.
//!
//! Derivatives are the spline's own: piecewise-quadratic `f'`, piecewise-linear
//! `f''`, piecewise-constant `f'''`, and `f'''' ≡ 0`. Orders ≥ 3 of a cubic
//! interpolant are crude, so scalar-curvature values from sampled profiles are
//! rough; volumes and fits only need orders ≤ 2.

use std::io::Read;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::radial::{Potential, RadialProfile};

/// Parse profile samples from CSV with header `t,f`. Rows may appear in any
/// order; the result is sorted by `t` and must have distinct `t` values.
pub fn read_profile_csv<R: Read>(reader: R) -> Result<Vec<(f64, f64)>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);

    {
        let headers = rdr.headers()?;
        let names: Vec<String> = headers.iter().map(|h| h.to_ascii_lowercase()).collect();
        if names != ["t", "f"] {
            return Err(Error::invalid(format!(
                "expected CSV header `t,f`, found `{}`",
                headers.iter().collect::<Vec<_>>().join(",")
            )));
        }
    }

    let mut samples = Vec::new();
    for (i, record) in rdr.records().enumerate() {
        let record = record?;
        let row = i + 2;
        if record.len() != 2 {
            return Err(Error::invalid(format!(
                "row {row}: expected 2 columns, found {}",
                record.len()
            )));
        }
        let parse = |col: usize, name: &str| -> Result<f64> {
            let raw = &record[col];
            let v: f64 = raw
                .parse()
                .map_err(|_| Error::invalid(format!("row {row}: cannot parse {name} = `{raw}`")))?;
            if !v.is_finite() {
                return Err(Error::invalid(format!("row {row}: {name} = {v} not finite")));
            }
            Ok(v)
        };
        samples.push((parse(0, "t")?, parse(1, "f")?));
    }
    sort_and_check(&mut samples)?;
    Ok(samples)
}

fn sort_and_check(samples: &mut [(f64, f64)]) -> Result<()> {
    if samples.len() < 2 {
        return Err(Error::invalid(format!(
            "need at least 2 samples, found {}",
            samples.len()
        )));
    }
    samples.sort_by(|a, b| a.0.total_cmp(&b.0));
    if samples[0].0 < 0.0 {
        return Err(Error::invalid(format!(
            "sample t = {} negative; t is a squared radius",
            samples[0].0
        )));
    }
    for w in samples.windows(2) {
        if w[0].0 == w[1].0 {
            return Err(Error::invalid(format!("duplicate sample t = {}", w[0].0)));
        }
    }
    Ok(())
}

/// Not-a-knot cubic spline with linear extension beyond the end knots.
#[derive(Debug, Clone)]
struct Spline {
    ts: Vec<f64>,
    fs: Vec<f64>,
    /// Knot second derivatives.
    m2: Vec<f64>,
}

impl Spline {
    fn new(samples: &[(f64, f64)]) -> Self {
        let n = samples.len();
        let ts: Vec<f64> = samples.iter().map(|s| s.0).collect();
        let fs: Vec<f64> = samples.iter().map(|s| s.1).collect();
        let mut m2 = vec![0.0; n];
        let h: Vec<f64> = ts.windows(2).map(|w| w[1] - w[0]).collect();
        if n == 3 {
            // Not-a-knot with a single interior knot degenerates; use the
            // parabola through the three points (constant curvature).
            let q = 2.0 * ((fs[2] - fs[1]) / h[1] - (fs[1] - fs[0]) / h[0]) / (h[0] + h[1]);
            m2 = vec![q; 3];
        } else if n > 3 {
            // Thomas solve of the tridiagonal system for interior m2. The end
            // rows are folded in via the not-a-knot relations (first two and
            // last two segments each share one cubic), which keep the system
            // tridiagonal:
            //   m2[0]   = (1 + h0/h1) m2[1]   - (h0/h1) m2[2]
            //   m2[n-1] = (1 + g)     m2[n-2] - g m2[n-3],  g = h[n-2]/h[n-3]
            let k = n - 2;
            let mut sub = vec![0.0; k];
            let mut diag = vec![0.0; k];
            let mut sup = vec![0.0; k];
            let mut rhs = vec![0.0; k];
            for i in 0..k {
                sub[i] = h[i];
                diag[i] = 2.0 * (h[i] + h[i + 1]);
                sup[i] = h[i + 1];
                rhs[i] = 6.0 * ((fs[i + 2] - fs[i + 1]) / h[i + 1] - (fs[i + 1] - fs[i]) / h[i]);
            }
            let r0 = h[0] / h[1];
            diag[0] += h[0] * (1.0 + r0);
            sup[0] -= h[0] * r0;
            let r1 = h[n - 2] / h[n - 3];
            diag[k - 1] += h[n - 2] * (1.0 + r1);
            sub[k - 1] -= h[n - 2] * r1;

            let mut c_prime = vec![0.0; k];
            for i in 0..k {
                let denom = if i == 0 {
                    diag[0]
                } else {
                    diag[i] - sub[i] * c_prime[i - 1]
                };
                c_prime[i] = sup[i] / denom;
                rhs[i] = if i == 0 {
                    rhs[0] / denom
                } else {
                    (rhs[i] - sub[i] * rhs[i - 1]) / denom
                };
            }
            m2[k] = rhs[k - 1];
            for i in (0..k - 1).rev() {
                m2[i + 1] = rhs[i] - c_prime[i] * m2[i + 2];
            }
            m2[0] = (1.0 + r0) * m2[1] - r0 * m2[2];
            m2[n - 1] = (1.0 + r1) * m2[n - 2] - r1 * m2[n - 3];
        }
        Spline { ts, fs, m2 }
    }

    /// Index of the segment [ts[i], ts[i+1]] containing t, clamped to the ends.
    fn segment(&self, t: f64) -> usize {
        let n = self.ts.len();
        self.ts.partition_point(|&x| x <= t).clamp(1, n - 1) - 1
    }

    fn seg_value(&self, i: usize, t: f64) -> f64 {
        let h = self.ts[i + 1] - self.ts[i];
        let s = t - self.ts[i];
        let b = (self.fs[i + 1] - self.fs[i]) / h - h * (2.0 * self.m2[i] + self.m2[i + 1]) / 6.0;
        self.fs[i] + s * (b + s * (self.m2[i] / 2.0 + s * (self.m2[i + 1] - self.m2[i]) / (6.0 * h)))
    }

    fn seg_slope(&self, i: usize, t: f64) -> f64 {
        let h = self.ts[i + 1] - self.ts[i];
        let s = t - self.ts[i];
        let b = (self.fs[i + 1] - self.fs[i]) / h - h * (2.0 * self.m2[i] + self.m2[i + 1]) / 6.0;
        b + s * (self.m2[i] + s * (self.m2[i + 1] - self.m2[i]) / (2.0 * h))
    }

    fn seg_curv(&self, i: usize, t: f64) -> f64 {
        let h = self.ts[i + 1] - self.ts[i];
        let s = t - self.ts[i];
        self.m2[i] + s * (self.m2[i + 1] - self.m2[i]) / h
    }

    fn seg_jerk(&self, i: usize) -> f64 {
        let h = self.ts[i + 1] - self.ts[i];
        (self.m2[i + 1] - self.m2[i]) / h
    }

    fn value(&self, t: f64) -> f64 {
        let n = self.ts.len();
        if t <= self.ts[0] {
            return self.fs[0] + self.seg_slope(0, self.ts[0]) * (t - self.ts[0]);
        }
        if t >= self.ts[n - 1] {
            let last = self.ts[n - 1];
            return self.fs[n - 1] + self.seg_slope(n - 2, last) * (t - last);
        }
        self.seg_value(self.segment(t), t)
    }
}

/// `Potential` backed by the spline; derivative orders 1–4 are the piecewise
/// polynomial's own, zero beyond the cubic and in the linear extensions.
#[derive(Debug, Clone)]
pub struct SampledPotential {
    spline: Spline,
}

impl SampledPotential {
    pub fn new(samples: &[(f64, f64)]) -> Result<Self> {
        let mut s = samples.to_vec();
        sort_and_check(&mut s)?;
        for (t, f) in &s {
            if !(t.is_finite() && f.is_finite()) {
                return Err(Error::invalid(format!("sample ({t}, {f}) not finite")));
            }
        }
        Ok(SampledPotential {
            spline: Spline::new(&s),
        })
    }
}

impl Potential for SampledPotential {
    fn deriv(&self, t: f64, k: usize) -> f64 {
        let sp = &self.spline;
        if k == 0 {
            return sp.value(t);
        }
        let n = sp.ts.len();
        if t <= sp.ts[0] {
            return if k == 1 { sp.seg_slope(0, sp.ts[0]) } else { 0.0 };
        }
        if t >= sp.ts[n - 1] {
            let last = sp.ts[n - 1];
            return if k == 1 { sp.seg_slope(n - 2, last) } else { 0.0 };
        }
        let i = sp.segment(t);
        match k {
            1 => sp.seg_slope(i, t),
            2 => sp.seg_curv(i, t),
            3 => sp.seg_jerk(i),
            _ => 0.0,
        }
    }

    fn breakpoints(&self, lo: f64, hi: f64) -> Vec<f64> {
        let ts = &self.spline.ts;
        let start = ts.partition_point(|&t| t <= lo);
        let end = ts.partition_point(|&t| t < hi);
        ts[start..end].to_vec()
    }
}

/// Build a profile from samples; the domain starts at the first sample's `t`.
/// `asymptotics` may carry declared or fitted `(e, c)`.
pub fn profile_from_samples(
    m: usize,
    gamma: u32,
    samples: &[(f64, f64)],
    asymptotics: Option<(f64, f64)>,
) -> Result<RadialProfile> {
    let potential = SampledPotential::new(samples)?;
    let t_min = potential.spline.ts[0];
    RadialProfile::new(m, gamma, t_min, asymptotics, Arc::new(potential))
}
