use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::hp::HPComplex;

/// Where sampled variables and `τ` are drawn from.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SampleDomain {
    /// Either a fixed list of `τ` values cycled through, or `None` to draw
    /// from the box below.
    pub fixed_tau: Option<Vec<[f64; 2]>>,
    pub tau_re: [f64; 2],
    pub tau_im: [f64; 2],
    /// `|Re z| ≤ z_re_max`.
    pub z_re_max: f64,
    /// `|Im z| ≤ z_im_frac · π · Im τ`; ignored when there is no `τ`.
    pub z_im_frac: f64,
    /// Bound on `|Im z|` used when the domain carries no `τ`.
    pub z_im_abs: f64,
    /// Draw real variables only.
    pub real_vars: bool,
    /// Whether assignments carry a `τ` at all.
    pub with_tau: bool,
}

impl Default for SampleDomain {
    fn default() -> Self {
        SampleDomain {
            fixed_tau: None,
            tau_re: [-0.5, 0.5],
            tau_im: [0.8, 1.6],
            z_re_max: PI,
            z_im_frac: 0.4,
            z_im_abs: 0.5,
            real_vars: false,
            with_tau: true,
        }
    }
}

impl SampleDomain {
    pub fn with_fixed_tau(taus: Vec<[f64; 2]>) -> Self {
        SampleDomain { fixed_tau: Some(taus), ..SampleDomain::default() }
    }

    /// Variables only, no modular parameter.
    pub fn tau_free() -> Self {
        SampleDomain { with_tau: false, ..SampleDomain::default() }
    }

    pub fn real(mut self) -> Self {
        self.real_vars = true;
        self
    }

    pub fn contains(&self, a: &Assignment) -> bool {
        let im_max = match a.tau {
            Some(t) => self.z_im_frac * PI * t[1],
            None => self.z_im_abs,
        };
        let z_ok = a
            .vars
            .iter()
            .all(|v| v[0].abs() <= self.z_re_max && v[1].abs() <= im_max && (!self.real_vars || v[1] == 0.0));
        let tau_ok = match (a.tau, &self.fixed_tau) {
            (None, _) => !self.with_tau,
            (Some(t), Some(list)) => list.contains(&t),
            (Some(t), None) => {
                (self.tau_re[0]..=self.tau_re[1]).contains(&t[0]) && (self.tau_im[0]..=self.tau_im[1]).contains(&t[1])
            }
        };
        z_ok && tau_ok
    }
}

/// One sample point: optional `τ` and the free variables, as exact binary
/// values.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Assignment {
    pub tau: Option<[f64; 2]>,
    pub vars: Vec<[f64; 2]>,
}

impl Assignment {
    pub fn tau_hp(&self, prec: u32) -> Option<HPComplex> {
        self.tau.map(|t| HPComplex::from_f64(prec, t[0], t[1]))
    }

    pub fn vars_hp(&self, prec: u32) -> Vec<HPComplex> {
        self.vars.iter().map(|v| HPComplex::from_f64(prec, v[0], v[1])).collect()
    }
}

fn draw(rng: &mut ChaCha8Rng, idx: usize, arity: usize, domain: &SampleDomain) -> Assignment {
    let tau = if !domain.with_tau {
        None
    } else if let Some(list) = &domain.fixed_tau {
        Some(list[idx % list.len()])
    } else {
        Some([
            rng.gen_range(domain.tau_re[0]..=domain.tau_re[1]),
            rng.gen_range(domain.tau_im[0]..=domain.tau_im[1]),
        ])
    };
    let im_max = match tau {
        Some(t) => domain.z_im_frac * PI * t[1],
        None => domain.z_im_abs,
    };
    let vars = (0..arity)
        .map(|_| {
            let re = rng.gen_range(-domain.z_re_max..=domain.z_re_max);
            let im = if domain.real_vars { 0.0 } else { rng.gen_range(-im_max..=im_max) };
            [re, im]
        })
        .collect();
    Assignment { tau, vars }
}

/// `count` deterministic points; identical arguments give identical lists.
pub fn sample_assignments(seed: u64, count: usize, arity: usize, domain: &SampleDomain) -> Vec<Assignment> {
    sample_assignments_where(seed, count, arity, domain, |_| true)
}

/// As [`sample_assignments`], redrawing any point rejected by `keep`.
pub fn sample_assignments_where(
    seed: u64,
    count: usize,
    arity: usize,
    domain: &SampleDomain,
    keep: impl Fn(&Assignment) -> bool,
) -> Vec<Assignment> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let a = draw(&mut rng, out.len(), arity, domain);
        if keep(&a) {
            out.push(a);
        }
    }
    out
}

/// Distance from `x` to the nearest multiple of `period`.
pub fn distance_to_lattice(x: f64, period: f64) -> f64 {
    let r = x.rem_euclid(period);
    r.min(period - r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_distinct() {
        let d = SampleDomain::default();
        let a = sample_assignments(0, 100, 2, &d);
        assert_eq!(a, sample_assignments(0, 100, 2, &d));
        assert_eq!(sample_assignments(0, 1, 2, &d)[0], a[0]);
        for i in 0..a.len() {
            for j in 0..i {
                assert_ne!(a[i], a[j]);
            }
        }
        assert_ne!(a, sample_assignments(1, 100, 2, &d));
    }

    #[test]
    fn domain_respected() {
        let d = SampleDomain::with_fixed_tau(vec![[0.1, 1.0], [-0.3, 1.4]]);
        for a in sample_assignments(3, 200, 3, &d) {
            assert!(d.contains(&a));
        }
        let d = SampleDomain::default().real();
        for a in sample_assignments(3, 50, 1, &d) {
            assert!(d.contains(&a));
        }
        let d = SampleDomain::tau_free();
        assert!(sample_assignments(3, 10, 2, &d).iter().all(|a| a.tau.is_none() && d.contains(a)));
    }

    #[test]
    fn lattice_distance() {
        assert!((distance_to_lattice(3.0, PI) - (PI - 3.0)).abs() < 1e-15);
        assert!(distance_to_lattice(-0.05, PI / 2.0) < 0.06);
    }
}
