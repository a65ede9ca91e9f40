//! The unramified extension of degree `k` of the p-adic integers, truncated
//! at `p^N`: `(Z/p^N)[t] / (m~(t))` where `m~` is the integer lift of the
//! residue field modulus.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::{ArithError, FieldElement, GaloisField, Ring};

/// An element of the truncated unramified ring; `k` coefficients in `[0, p^N)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct UnramifiedInteger(pub Vec<u64>);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnramifiedRing {
    residue: GaloisField,
    precision: u32,
    modulus_pn: u64,
}

impl UnramifiedRing {
    pub fn new(residue: GaloisField, precision: u32) -> Result<Self, ArithError> {
        assert!(precision >= 1, "precision must be positive");
        let p = residue.p();
        let pn = (p as u128)
            .checked_pow(precision)
            .filter(|&x| x < 1 << 62)
            .ok_or(ArithError::PrecisionTooLarge { p, n: precision })?;
        Ok(UnramifiedRing {
            residue,
            precision,
            modulus_pn: pn as u64,
        })
    }

    pub fn residue_field(&self) -> &GaloisField {
        &self.residue
    }

    pub fn p(&self) -> u64 {
        self.residue.p()
    }

    pub fn k(&self) -> u32 {
        self.residue.k()
    }

    /// Absolute precision `N`: elements are known modulo `p^N`.
    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn pn(&self) -> u64 {
        self.modulus_pn
    }

    pub fn reduce(&self, a: &UnramifiedInteger) -> FieldElement {
        let p = self.p();
        self.residue.from_coeffs(&a.0.iter().map(|c| c % p).collect::<Vec<_>>())
    }

    /// Lift with coefficient representatives in `[0, p)`.
    pub fn lift(&self, x: &FieldElement) -> UnramifiedInteger {
        UnramifiedInteger(x.0.clone())
    }

    pub fn from_coeffs(&self, coeffs: &[i128]) -> UnramifiedInteger {
        let pn = self.modulus_pn as i128;
        let mut v: Vec<u64> = coeffs.iter().map(|c| c.rem_euclid(pn) as u64).collect();
        v.resize(self.k() as usize, 0);
        UnramifiedInteger(v)
    }

    /// Image of a p-integral rational number.
    pub fn from_rational(&self, q: &BigRational) -> Result<UnramifiedInteger, ArithError> {
        let pn = BigInt::from(self.modulus_pn);
        let p = BigInt::from(self.p());
        let den = q.denom();
        if den.mod_floor(&p).is_zero() {
            return Err(ArithError::NotIntegral(q.to_string()));
        }
        let num = q.numer().mod_floor(&pn);
        let den_inv = den.mod_floor(&pn).extended_gcd(&pn).x.mod_floor(&pn);
        let v = (num * den_inv).mod_floor(&pn);
        Ok(self.from_coeffs(&[v.to_i128().unwrap()]))
    }

    /// p-adic valuation, capped at the precision `N`.
    pub fn valuation(&self, a: &UnramifiedInteger) -> u32 {
        let p = self.p();
        a.0.iter()
            .map(|&c| {
                if c == 0 {
                    return self.precision;
                }
                let mut v = 0;
                let mut c = c;
                while c % p == 0 {
                    c /= p;
                    v += 1;
                }
                v.min(self.precision)
            })
            .min()
            .unwrap_or(self.precision)
    }

    pub fn is_unit(&self, a: &UnramifiedInteger) -> bool {
        !self.residue.is_zero(&self.reduce(a))
    }

    pub fn inv(&self, a: &UnramifiedInteger) -> Result<UnramifiedInteger, ArithError> {
        let r = self.reduce(a);
        let r_inv = self.residue_inv(&r).ok_or(ArithError::NotAUnit {
            valuation: self.valuation(a),
        })?;
        // Newton: y <- y (2 - a y); precision doubles each step
        let mut y = self.lift(&r_inv);
        let two = self.from_int(2);
        let mut known = 1u32;
        while known < self.precision {
            y = self.mul(&y, &self.sub(&two, &self.mul(a, &y)));
            known *= 2;
        }
        Ok(y)
    }

    fn residue_inv(&self, r: &FieldElement) -> Option<FieldElement> {
        use super::Field;
        self.residue.inv(r)
    }

    /// Exact division by `p^e`; fails if some coefficient is not divisible.
    /// The result is only meaningful modulo `p^(N-e)`.
    pub fn div_p_power(&self, a: &UnramifiedInteger, e: u32) -> Result<UnramifiedInteger, ArithError> {
        if e == 0 {
            return Ok(a.clone());
        }
        let pe = self.p().pow(e);
        if a.0.iter().any(|c| c % pe != 0) {
            return Err(ArithError::InexactDivision);
        }
        Ok(UnramifiedInteger(a.0.iter().map(|c| c / pe).collect()))
    }

    pub fn mul_p_power(&self, a: &UnramifiedInteger, e: u32) -> UnramifiedInteger {
        let pn = self.modulus_pn as u128;
        let mut f = 1u128;
        for _ in 0..e.min(self.precision) {
            f = f * self.p() as u128 % pn;
        }
        if e >= self.precision {
            f = 0;
        }
        UnramifiedInteger(a.0.iter().map(|&c| (c as u128 * f % pn) as u64).collect())
    }

    /// `a^q` where `q` is the residue field size.
    pub fn frobenius_power(&self, a: &UnramifiedInteger) -> UnramifiedInteger {
        let mut x = a.clone();
        for _ in 0..self.k() {
            x = self.pow(&x, self.p());
        }
        x
    }

    /// Signed representative of a coefficient in `(-p^N/2, p^N/2]`.
    pub fn signed(&self, c: u64) -> i128 {
        let pn = self.modulus_pn as i128;
        let c = c as i128;
        if c > pn / 2 {
            c - pn
        } else {
            c
        }
    }

    pub fn to_bigint_coeffs(&self, a: &UnramifiedInteger) -> Vec<BigInt> {
        a.0.iter().map(|&c| BigInt::from(self.signed(c))).collect()
    }
}

impl Ring for UnramifiedRing {
    type Elem = UnramifiedInteger;

    fn zero(&self) -> UnramifiedInteger {
        UnramifiedInteger(vec![0; self.k() as usize])
    }

    fn one(&self) -> UnramifiedInteger {
        self.from_int(1)
    }

    fn from_int(&self, n: i64) -> UnramifiedInteger {
        self.from_coeffs(&[n as i128])
    }

    fn add(&self, a: &UnramifiedInteger, b: &UnramifiedInteger) -> UnramifiedInteger {
        let pn = self.modulus_pn;
        UnramifiedInteger(
            a.0.iter()
                .zip(&b.0)
                .map(|(&x, &y)| {
                    let s = x + y;
                    if s >= pn {
                        s - pn
                    } else {
                        s
                    }
                })
                .collect(),
        )
    }

    fn neg(&self, a: &UnramifiedInteger) -> UnramifiedInteger {
        let pn = self.modulus_pn;
        UnramifiedInteger(a.0.iter().map(|&x| if x == 0 { 0 } else { pn - x }).collect())
    }

    fn mul(&self, a: &UnramifiedInteger, b: &UnramifiedInteger) -> UnramifiedInteger {
        let pn = self.modulus_pn as u128;
        let k = self.k() as usize;
        if k == 1 {
            return UnramifiedInteger(vec![(a.0[0] as u128 * b.0[0] as u128 % pn) as u64]);
        }
        let mut prod = vec![0u128; 2 * k - 1];
        for (i, &x) in a.0.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.0.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u128 * y as u128) % pn;
            }
        }
        let m = self.residue.modulus();
        for top in (k..prod.len()).rev() {
            let c = prod[top];
            if c == 0 {
                continue;
            }
            prod[top] = 0;
            for i in 0..k {
                let idx = top - k + i;
                let sub = c * m[i] as u128 % pn;
                prod[idx] = (prod[idx] + pn - sub) % pn;
            }
        }
        UnramifiedInteger(prod[..k].iter().map(|&c| c as u64).collect())
    }

    fn is_zero(&self, a: &UnramifiedInteger) -> bool {
        a.0.iter().all(|&c| c == 0)
    }
}

/// The Teichmüller representative of `x`: the unique `(q-1)`-th root of unity
/// (or zero) reducing to `x`, computed as the limit of `u -> u^q` from any lift.
pub fn teichmuller_lift(ring: &UnramifiedRing, x: &FieldElement) -> UnramifiedInteger {
    let mut u = ring.lift(x);
    // each application gains one p-adic digit
    for _ in 0..ring.precision() {
        u = ring.frobenius_power(&u);
    }
    u
}
