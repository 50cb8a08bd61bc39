//! Coordinate arithmetic in `(Z/m)[x]/(f)` for a monic `f`.
//!
//! With `m = p^N` this is the Galois ring `W_N(F_{p^a})`; with `m = p` it is
//! the residue field `F_{p^a}`. Elements are plain coordinate vectors in the
//! power basis `1, x, ..., x^{a-1}`.

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientRing {
    modulus: u64,
    /// Monic defining polynomial, low degree first, length `degree + 1`.
    poly: Vec<u64>,
}

#[inline]
pub(crate) fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

#[inline]
pub(crate) fn addmod(a: u64, b: u64, m: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % m as u128) as u64
}

#[inline]
pub(crate) fn submod(a: u64, b: u64, m: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        m - (b - a)
    }
}

pub(crate) fn powmod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, b, m);
        }
        b = mulmod(b, b, m);
        e >>= 1;
    }
    r
}

/// Inverse of `a` modulo `m`, if it exists.
pub(crate) fn invmod(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

impl QuotientRing {
    pub fn new(modulus: u64, poly: Vec<u64>) -> Self {
        assert!(modulus >= 2);
        assert!(poly.len() >= 2, "defining polynomial must have degree >= 1");
        assert_eq!(*poly.last().unwrap() % modulus, 1, "defining polynomial must be monic");
        let poly = poly.into_iter().map(|c| c % modulus).collect();
        Self { modulus, poly }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn degree(&self) -> usize {
        self.poly.len() - 1
    }

    pub fn poly(&self) -> &[u64] {
        &self.poly
    }

    /// Same defining polynomial over a different modulus.
    pub fn with_modulus(&self, modulus: u64) -> Self {
        Self::new(modulus, self.poly.clone())
    }

    pub fn zero(&self) -> Vec<u64> {
        vec![0; self.degree()]
    }

    pub fn one(&self) -> Vec<u64> {
        self.int(1)
    }

    pub fn int(&self, c: i64) -> Vec<u64> {
        let mut v = self.zero();
        v[0] = (c as i128).rem_euclid(self.modulus as i128) as u64;
        v
    }

    /// The generator `x` of the ring.
    pub fn generator(&self) -> Vec<u64> {
        let mut v = self.zero();
        if self.degree() == 1 {
            // x = -f_0 when f = x + f_0
            v[0] = submod(0, self.poly[0], self.modulus);
        } else {
            v[1] = 1;
        }
        v
    }

    pub fn is_zero(&self, a: &[u64]) -> bool {
        a.iter().all(|&c| c == 0)
    }

    pub fn reduce(&self, a: &[u64]) -> Vec<u64> {
        a.iter().map(|&c| c % self.modulus).collect()
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).map(|(&x, &y)| addmod(x, y, self.modulus)).collect()
    }

    pub fn sub(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).map(|(&x, &y)| submod(x, y, self.modulus)).collect()
    }

    pub fn neg(&self, a: &[u64]) -> Vec<u64> {
        a.iter().map(|&x| submod(0, x, self.modulus)).collect()
    }

    pub fn scale(&self, a: &[u64], k: u64) -> Vec<u64> {
        let k = k % self.modulus;
        a.iter().map(|&x| mulmod(x, k, self.modulus)).collect()
    }

    pub fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let d = self.degree();
        let m = self.modulus;
        if d == 1 {
            return vec![mulmod(a[0], b[0], m)];
        }
        let mut prod = vec![0u128; 2 * d - 1];
        let mm = m as u128;
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u128 * y as u128) % mm;
            }
        }
        // reduce using x^d = -(f_0 + ... + f_{d-1} x^{d-1})
        for k in (d..prod.len()).rev() {
            let c = (prod[k] % mm) as u64;
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for i in 0..d {
                let sub = mulmod(c, self.poly[i], m) as u128;
                prod[k - d + i] = (prod[k - d + i] + mm - sub) % mm;
            }
        }
        prod.truncate(d);
        prod.into_iter().map(|c| (c % mm) as u64).collect()
    }

    pub fn pow(&self, a: &[u64], mut e: u64) -> Vec<u64> {
        let mut r = self.one();
        let mut b = a.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(&r, &b);
            }
            e >>= 1;
            if e > 0 {
                b = self.mul(&b, &b);
            }
        }
        r
    }

    /// Evaluate the defining polynomial (or any polynomial with integer
    /// coefficients `coeffs`, low degree first) at `y`.
    pub fn eval_int_poly(&self, coeffs: &[u64], y: &[u64]) -> Vec<u64> {
        let mut acc = self.zero();
        for &c in coeffs.iter().rev() {
            acc = self.mul(&acc, y);
            acc[0] = addmod(acc[0], c % self.modulus, self.modulus);
        }
        acc
    }

    /// Apply a ring endomorphism given by the images of the power basis.
    pub fn apply_linear(&self, a: &[u64], images: &[Vec<u64>]) -> Vec<u64> {
        let mut acc = self.zero();
        for (i, &c) in a.iter().enumerate() {
            if c != 0 {
                acc = self.add(&acc, &self.scale(&images[i], c));
            }
        }
        acc
    }
}
