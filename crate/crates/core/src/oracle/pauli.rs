use num_complex::Complex64;

use crate::error::{Error, Result};

/// `c · X^x Z^z` on up to 64 qubits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PauliOp {
    pub x: u64,
    pub z: u64,
    pub c: Complex64,
}

fn parity(v: u64) -> bool {
    v.count_ones() % 2 == 1
}

impl PauliOp {
    pub fn identity() -> Self {
        Self { x: 0, z: 0, c: Complex64::new(1.0, 0.0) }
    }

    /// `'I'`, `'X'`, `'Y'` or `'Z'` on qubit `q`.
    pub fn single(p: char, q: usize) -> Result<Self> {
        if q >= 64 {
            return Err(Error::Parameter(format!("qubit {q} out of range")));
        }
        let bit = 1u64 << q;
        let one = Complex64::new(1.0, 0.0);
        Ok(match p.to_ascii_uppercase() {
            'I' => Self::identity(),
            'X' => Self { x: bit, z: 0, c: one },
            'Z' => Self { x: 0, z: bit, c: one },
            'Y' => Self { x: bit, z: bit, c: Complex64::new(0.0, 1.0) },
            _ => return Err(Error::Parameter(format!("unknown Pauli '{p}'"))),
        })
    }

    /// Hermitian Pauli with the given x/z bit patterns (`i^{|x∧z|} X^x Z^z`).
    pub fn hermitian(x: u64, z: u64) -> Self {
        let c = Complex64::new(0.0, 1.0).powu((x & z).count_ones() % 4);
        Self { x, z, c }
    }

    pub fn z_string(qubits: &[usize]) -> Self {
        let z = qubits.iter().fold(0u64, |m, &q| m | 1 << q);
        Self { x: 0, z, c: Complex64::new(1.0, 0.0) }
    }

    pub fn scaled(self, s: f64) -> Self {
        Self { c: self.c * s, ..self }
    }

    pub fn support(&self) -> u64 {
        self.x | self.z
    }

    /// `X^{x1} Z^{z1} X^{x2} Z^{z2} = (−1)^{|z1∧x2|} X^{x1⊕x2} Z^{z1⊕z2}`.
    pub fn mul(&self, other: &Self) -> Self {
        let sign = if parity(self.z & other.x) { -1.0 } else { 1.0 };
        Self { x: self.x ^ other.x, z: self.z ^ other.z, c: self.c * other.c * sign }
    }

    /// `(X^x Z^z)† = Z^z X^x = (−1)^{|x∧z|} X^x Z^z`.
    pub fn adjoint(&self) -> Self {
        let sign = if parity(self.x & self.z) { -1.0 } else { 1.0 };
        Self { c: self.c.conj() * sign, ..*self }
    }

    /// `f_j = Z_{<j} (X_j + iY_j)/2` as a sum of two Pauli operators.
    pub fn annihilator(j: usize) -> Vec<Self> {
        let string = Self::z_string(&(0..j).collect::<Vec<_>>());
        let x = string.mul(&Self::single('X', j).expect("qubit index"));
        let y = string.mul(&Self::single('Y', j).expect("qubit index"));
        vec![x.scaled(0.5), Self { c: y.c * Complex64::new(0.0, 0.5), ..y }]
    }

    /// Image of basis state `b`: target index and amplitude.
    #[inline]
    pub fn act(&self, b: usize) -> (usize, Complex64) {
        let sign = if parity(b as u64 & self.z) { -1.0 } else { 1.0 };
        (b ^ self.x as usize, self.c * sign)
    }

    pub fn apply_add(&self, psi: &[Complex64], out: &mut [Complex64]) {
        let x = self.x as usize;
        for (b, &a) in psi.iter().enumerate() {
            if parity(b as u64 & self.z) {
                out[b ^ x] -= self.c * a;
            } else {
                out[b ^ x] += self.c * a;
            }
        }
    }

    /// Uses only the real part of the coefficient.
    pub fn apply_add_real(&self, psi: &[f64], out: &mut [f64]) {
        let x = self.x as usize;
        let c = self.c.re;
        for (b, &a) in psi.iter().enumerate() {
            if parity(b as u64 & self.z) {
                out[b ^ x] -= c * a;
            } else {
                out[b ^ x] += c * a;
            }
        }
    }

    /// `⟨ψ|P|ψ⟩`.
    pub fn expectation(&self, psi: &[Complex64]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (b, &a) in psi.iter().enumerate() {
            let (t, amp) = self.act(b);
            acc += psi[t].conj() * amp * a;
        }
        acc
    }

    /// Restriction to the qubits listed in `sites`, relabelled `0..sites.len()`.
    pub fn restrict(&self, sites: &[usize]) -> Self {
        let (mut x, mut z) = (0u64, 0u64);
        for (k, &q) in sites.iter().enumerate() {
            x |= (self.x >> q & 1) << k;
            z |= (self.z >> q & 1) << k;
        }
        Self { x, z, c: self.c }
    }
}
