//! Expectation values of polynomials in the input ladder operators for a
//! separable two-mode input, using only the five moments of each port.
//!
//! Words are split into their mode-0 and mode-1 subsequences (operators of
//! different modes commute), each subsequence is normal ordered with
//! `a a† = a† a + 1`, and the resulting normal-ordered moments `⟨a†ᵐ aⁿ⟩`
//! (`m, n ≤ 2`) are read off the port moments.

use crate::states::PortMoments;
use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Op {
    pub mode: u8,
    pub dag: bool,
}

#[derive(Debug, Clone)]
pub(crate) struct Term {
    pub coef: Complex64,
    pub ops: Vec<Op>,
}

#[derive(Debug, Clone, Default)]
pub(crate) struct Poly {
    pub terms: Vec<Term>,
}

impl Poly {
    /// `Σ_j c_j a_j`
    pub fn lowering(coefs: [Complex64; 2]) -> Self {
        let terms = (0..2)
            .map(|j| Term { coef: coefs[j], ops: vec![Op { mode: j as u8, dag: false }] })
            .collect();
        Poly { terms }
    }

    /// Hermitian conjugate.
    pub fn adjoint(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| Term {
                coef: t.coef.conj(),
                ops: t.ops.iter().rev().map(|o| Op { mode: o.mode, dag: !o.dag }).collect(),
            })
            .collect();
        Poly { terms }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let terms = self.terms.iter().map(|t| Term { coef: t.coef * c, ops: t.ops.clone() }).collect();
        Poly { terms }
    }

    pub fn add(&self, other: &Poly) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Poly { terms }
    }

    pub fn sub(&self, other: &Poly) -> Self {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn mul(&self, other: &Poly) -> Self {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                let mut ops = a.ops.clone();
                ops.extend_from_slice(&b.ops);
                terms.push(Term { coef: a.coef * b.coef, ops });
            }
        }
        Poly { terms }
    }

    /// Substitute `a_j → γ_j + b_j`, expanding every word in the
    /// fluctuation operators `b_j`.
    pub fn displace(&self, gamma: [Complex64; 2]) -> Self {
        let mut terms = Vec::new();
        for t in &self.terms {
            let mut partial = vec![Term { coef: t.coef, ops: Vec::with_capacity(t.ops.len()) }];
            for op in &t.ops {
                let shift = if op.dag { gamma[op.mode as usize].conj() } else { gamma[op.mode as usize] };
                let mut next = Vec::with_capacity(partial.len() * 2);
                for p in partial {
                    if shift != Complex64::new(0.0, 0.0) {
                        next.push(Term { coef: p.coef * shift, ops: p.ops.clone() });
                    }
                    let mut ops = p.ops;
                    ops.push(*op);
                    next.push(Term { coef: p.coef, ops });
                }
                partial = next;
            }
            terms.extend(partial);
        }
        Poly { terms }
    }

    /// Drop the c-number terms.
    pub fn without_constant(&self) -> Self {
        Poly { terms: self.terms.iter().filter(|t| !t.ops.is_empty()).cloned().collect() }
    }

    pub fn expect(&self, ports: &[PortMoments; 2]) -> Complex64 {
        self.terms.iter().map(|t| t.coef * expect_word(&t.ops, ports)).sum()
    }
}

/// Moments of the zero-mean fluctuation `b = a − ⟨a⟩` of a Gaussian port.
pub(crate) fn fluctuation_moments(m: &PortMoments) -> PortMoments {
    let b2 = m.mean_a2 - m.mean_a * m.mean_a;
    let nb = m.mean_n - m.mean_a.norm_sqr();
    PortMoments {
        mean_a: Complex64::new(0.0, 0.0),
        mean_a2: b2,
        mean_n: nb,
        var_n: b2.norm_sqr() + nb * nb + nb,
        corr_na: Complex64::new(0.0, 0.0),
    }
}

fn expect_word(ops: &[Op], ports: &[PortMoments; 2]) -> Complex64 {
    let mut value = Complex64::new(1.0, 0.0);
    for mode in 0..2u8 {
        let word: Vec<bool> = ops.iter().filter(|o| o.mode == mode).map(|o| o.dag).collect();
        if !word.is_empty() {
            value *= single_mode(&word, &ports[mode as usize]);
        }
    }
    value
}

/// `⟨w⟩` for a single-mode word (`true` = creation operator).
fn single_mode(word: &[bool], m: &PortMoments) -> Complex64 {
    match word.windows(2).position(|w| !w[0] && w[1]) {
        None => {
            let daggers = word.iter().filter(|&&d| d).count();
            normal_moment(daggers, word.len() - daggers, m)
        }
        Some(i) => {
            let mut swapped = word.to_vec();
            swapped.swap(i, i + 1);
            let mut contracted = word[..i].to_vec();
            contracted.extend_from_slice(&word[i + 2..]);
            single_mode(&swapped, m) + single_mode(&contracted, m)
        }
    }
}

/// `⟨a†ᵐ aⁿ⟩`
fn normal_moment(daggers: usize, lowers: usize, m: &PortMoments) -> Complex64 {
    let re = |x: f64| Complex64::new(x, 0.0);
    let n_a = m.corr_na + m.mean_a * m.mean_n;
    match (daggers, lowers) {
        (0, 0) => re(1.0),
        (0, 1) => m.mean_a,
        (1, 0) => m.mean_a.conj(),
        (0, 2) => m.mean_a2,
        (2, 0) => m.mean_a2.conj(),
        (1, 1) => re(m.mean_n),
        (1, 2) => n_a,
        (2, 1) => n_a.conj(),
        (2, 2) => re(m.var_n + m.mean_n * m.mean_n - m.mean_n),
        (p, q) => unreachable!("moment a†^{} a^{} is beyond second order in one mode", p, q),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{port_moments, Coherent, GaussianPort, Squeeze};

    fn ports() -> [PortMoments; 2] {
        [
            port_moments(&GaussianPort::new(Coherent::new(0.7, 0.4), Squeeze::new(0.3, 1.1))),
            port_moments(&GaussianPort::new(Coherent::new(1.1, -0.5), Squeeze::new(0.5, 2.0))),
        ]
    }

    #[test]
    fn number_operator_reproduces_moments() {
        let p = ports();
        let a0 = Poly::lowering([Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]);
        let n0 = a0.adjoint().mul(&a0);
        let mean = n0.expect(&p).re;
        let second = n0.mul(&n0).expect(&p).re;
        assert!((mean - p[0].mean_n).abs() < 1e-14);
        assert!((second - mean * mean - p[0].var_n).abs() < 1e-13);
    }

    #[test]
    fn centred_variance_matches_raw() {
        let p = ports();
        let centred = [fluctuation_moments(&p[0]), fluctuation_moments(&p[1])];
        let a = Poly::lowering([Complex64::new(0.6, 0.1), Complex64::new(-0.3, 0.7)]);
        let n = a.adjoint().mul(&a);
        let raw = n.mul(&n).expect(&p).re - n.expect(&p).re.powi(2);
        let d = n.displace([p[0].mean_a, p[1].mean_a]).without_constant();
        let var = d.mul(&d).expect(&centred).re - d.expect(&centred).re.powi(2);
        assert!((raw - var).abs() < 1e-12 * raw);
        assert!((fluctuation_moments(&p[0]).var_n - port_moments(&GaussianPort::squeezed_vacuum(Squeeze::new(0.3, 1.1))).var_n).abs() < 1e-14);
    }

    #[test]
    fn commutator_is_one() {
        let p = ports();
        let a1 = Poly::lowering([Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]);
        let comm = a1.mul(&a1.adjoint()).sub(&a1.adjoint().mul(&a1));
        assert!((comm.expect(&p) - 1.0).norm() < 1e-14);
    }
}
