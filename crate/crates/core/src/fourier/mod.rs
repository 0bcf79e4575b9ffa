//! The semi-Boolean Fourier transform between phase exponents and parity
//! (phase-gadget) coefficients.
//!
//! For a table `α_b` over `b ∈ 𝔹ⁿ` the spectrum is
//!
//! ```text
//! α̃_c = −1/2^{n−1} · Σ_b α_b χ(b, c),      χ(b, c) = (−1)^{b·c}
//! α_b = Σ_{c≠0} α̃_c Ω(b, c) + g,          Ω(b, c) = b₁c₁ ⊕ … ⊕ bₙcₙ
//! ```
//!
//! where the constant `g = −½ Σ_c α̃_c` (sum over every `c`, including
//! `0…0`) is kept as [`GadgetForm::global_phase`]. It always equals
//! `α_{0…0}`.
//!
//! These coefficients are `−2` times the textbook Fourier coefficients
//! `f̂(c) = 2^{−n} Σ_b f(b) χ(b, c)`.

mod diagrams;
mod io;
pub mod lemmas;

use num_complex::Complex64 as C64;
use num_rational::Rational64;
use thiserror::Error;

use crate::bits::BitString;

pub use diagrams::{
    expand_gadget, expand_hbox, gadget_form_diagram, gadget_terms, hbox_terms, nf_to_gadget_form,
    phase_table_diagram, to_zx, DEFAULT_EPS,
};

/// Largest `n` accepted by the transforms.
pub const MAX_QUBITS: usize = 20;

#[derive(Debug, Error, PartialEq)]
pub enum FourierError {
    #[error("table has {0} entries; expected 2^n with 1 <= n <= {MAX_QUBITS}")]
    BadLength(usize),
    #[error("coefficient for c = {0} is not real (imaginary part {1:e})")]
    NonReal(String, f64),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("epsilon must lie in (0, 1), got {0}")]
    BadEpsilon(f64),
    #[error(transparent)]
    Diagram(#[from] crate::diagram::DiagramError),
}

/// `Ω(b, c) = b·c mod 2`.
pub fn omega(b: &BitString, c: &BitString) -> u8 {
    b.dot(c) as u8
}

/// `χ(b, c) = (−1)^{b·c}`.
pub fn chi(b: &BitString, c: &BitString) -> i8 {
    if b.dot(c) {
        -1
    } else {
        1
    }
}

fn qubits_for(len: usize) -> Result<usize, FourierError> {
    if len < 2 || !len.is_power_of_two() || len.trailing_zeros() as usize > MAX_QUBITS {
        return Err(FourierError::BadLength(len));
    }
    Ok(len.trailing_zeros() as usize)
}

/// Phase exponents `α_b`, indexed by the value of `b` (first bit most
/// significant).
#[derive(Clone, Debug, PartialEq)]
pub struct CoeffTable {
    n: usize,
    alpha: Vec<C64>,
}

impl CoeffTable {
    pub fn new(alpha: Vec<C64>) -> Result<Self, FourierError> {
        let n = qubits_for(alpha.len())?;
        Ok(Self { n, alpha })
    }

    pub fn zeros(n: usize) -> Self {
        Self { n, alpha: vec![C64::new(0.0, 0.0); 1 << n] }
    }

    pub fn from_real(alpha: &[f64]) -> Result<Self, FourierError> {
        Self::new(alpha.iter().map(|&a| C64::new(a, 0.0)).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, b: &BitString) -> C64 {
        self.alpha[b.index()]
    }

    pub fn set(&mut self, b: &BitString, v: C64) {
        self.alpha[b.index()] = v;
    }

    pub fn values(&self) -> &[C64] {
        &self.alpha
    }

    pub fn iter(&self) -> impl Iterator<Item = (BitString, C64)> + '_ {
        let n = self.n;
        self.alpha.iter().enumerate().map(move |(i, &a)| (BitString::new(i as u64, n), a))
    }
}

/// Global phase plus the parity coefficients `α̃_c` for `c ≠ 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct GadgetForm {
    n: usize,
    /// `tilde[c - 1]` holds `α̃_c`.
    tilde: Vec<C64>,
    global_phase: C64,
}

impl GadgetForm {
    pub fn new(n: usize, tilde: Vec<C64>, global_phase: C64) -> Result<Self, FourierError> {
        if n == 0 || n > MAX_QUBITS || tilde.len() != (1 << n) - 1 {
            return Err(FourierError::BadLength(tilde.len() + 1));
        }
        Ok(Self { n, tilde, global_phase })
    }

    pub fn zeros(n: usize) -> Self {
        Self { n, tilde: vec![C64::new(0.0, 0.0); (1 << n) - 1], global_phase: C64::new(0.0, 0.0) }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `α̃_c`; panics for `c = 0…0`.
    pub fn get(&self, c: &BitString) -> C64 {
        assert!(!c.is_zero(), "the zero parity lives in the global phase");
        self.tilde[c.index() - 1]
    }

    pub fn set(&mut self, c: &BitString, v: C64) {
        assert!(!c.is_zero(), "the zero parity lives in the global phase");
        self.tilde[c.index() - 1] = v;
    }

    pub fn global_phase(&self) -> C64 {
        self.global_phase
    }

    pub fn set_global_phase(&mut self, g: C64) {
        self.global_phase = g;
    }

    /// `(c, α̃_c)` for every nonzero `c`, in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = (BitString, C64)> + '_ {
        let n = self.n;
        self.tilde.iter().enumerate().map(move |(i, &t)| (BitString::new(i as u64 + 1, n), t))
    }

    /// Nonzero terms only.
    pub fn support(&self, tol: f64) -> Vec<(BitString, C64)> {
        self.iter().filter(|(_, t)| t.norm() > tol).collect()
    }
}

/// In-place Walsh–Hadamard transform: `v[c] ← Σ_b v[b] χ(b, c)`.
pub fn walsh_hadamard<T>(v: &mut [T])
where
    T: Copy + std::ops::Add<Output = T> + std::ops::Sub<Output = T>,
{
    let len = v.len();
    let mut h = 1;
    while h < len {
        for i in (0..len).step_by(2 * h) {
            for j in i..i + h {
                let (x, y) = (v[j], v[j + h]);
                v[j] = x + y;
                v[j + h] = x - y;
            }
        }
        h *= 2;
    }
}

pub fn forward(ct: &CoeffTable) -> GadgetForm {
    let n = ct.n;
    let mut w = ct.alpha.clone();
    walsh_hadamard(&mut w);
    let scale = -1.0 / (1u64 << (n - 1)) as f64;
    let all: Vec<C64> = w.iter().map(|&x| x * scale).collect();
    let global = all.iter().sum::<C64>() * -0.5;
    GadgetForm { n, tilde: all[1..].to_vec(), global_phase: global }
}

pub fn inverse(gf: &GadgetForm) -> CoeffTable {
    // Σ_{c≠0} α̃_c Ω(b,c) = ½ Σ_{c≠0} α̃_c (1 − χ(b,c)).
    let n = gf.n;
    let mut v = Vec::with_capacity(1 << n);
    v.push(C64::new(0.0, 0.0));
    v.extend_from_slice(&gf.tilde);
    let total: C64 = gf.tilde.iter().sum();
    walsh_hadamard(&mut v);
    let alpha = v.iter().map(|&s| (total - s) * 0.5 + gf.global_phase).collect();
    CoeffTable { n, alpha }
}

/// Direct `O(4ⁿ)` evaluation of the forward transform, straight from the
/// definition. Used to cross-check [`forward`].
pub fn forward_direct(ct: &CoeffTable) -> GadgetForm {
    let n = ct.n;
    let scale = -1.0 / (1u64 << (n - 1)) as f64;
    let all: Vec<C64> = BitString::all(n)
        .map(|c| ct.iter().map(|(b, a)| a * chi(&b, &c) as f64).sum::<C64>() * scale)
        .collect();
    let global = all.iter().sum::<C64>() * -0.5;
    GadgetForm { n, tilde: all[1..].to_vec(), global_phase: global }
}

/// Direct evaluation of the inverse transform.
pub fn inverse_direct(gf: &GadgetForm) -> CoeffTable {
    let n = gf.n;
    let alpha = BitString::all(n)
        .map(|b| gf.iter().map(|(c, t)| t * omega(&b, &c) as f64).sum::<C64>() + gf.global_phase)
        .collect();
    CoeffTable { n, alpha }
}

/// Forward transform of a table of exact multiples of π. Returns the
/// coefficients for every `c` (index 0 included) and the global phase,
/// all as multiples of π.
pub fn forward_exact(alpha: &[Rational64]) -> (Vec<Rational64>, Rational64) {
    let n = alpha.len().trailing_zeros() as usize;
    let mut w = alpha.to_vec();
    walsh_hadamard(&mut w);
    let scale = Rational64::new(-1, 1 << (n - 1));
    let all: Vec<Rational64> = w.into_iter().map(|x| x * scale).collect();
    let global = all.iter().fold(Rational64::from_integer(0), |a, &b| a + b) * Rational64::new(-1, 2);
    (all, global)
}

/// `Σ_{d⊆c, d≠0} (−2)^{|d|−1}`, by enumerating the subsets of `c`.
pub fn xor_subset_sum(c: &BitString) -> i64 {
    c.nonzero_subsets().map(|d| (-2i64).pow(d.weight() - 1)).sum()
}

/// `Σ_{D=1}^{C} (−2)^{D−1} binom(C, D)`, the weight-only form of
/// [`xor_subset_sum`].
pub fn xor_subset_sum_by_weight(weight: u32) -> i128 {
    let mut binom: i128 = 1;
    let mut total: i128 = 0;
    for d in 1..=weight as i128 {
        binom = binom * (weight as i128 - d + 1) / d;
        total += (-2i128).pow(d as u32 - 1) * binom;
    }
    total
}

pub use io::{format_spectrum, format_table, parse_spectrum, parse_table};
