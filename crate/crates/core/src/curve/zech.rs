use crate::error::{Error, Result};
use crate::ff_base::{Poly, PrimeField};

/// Sentinel log for the zero element.
pub const ZERO: u32 = u32::MAX;

/// F_P = F_p[T]/P in logarithmic form: element g^k is stored as k, zero as
/// [`ZERO`]. Addition goes through the Zech table log(1 + g^k).
#[derive(Clone, Debug)]
pub struct ZechField {
    p: u32,
    size: u32,
    zech: Vec<u32>,
    /// log -> base-p index of the element
    exp: Vec<u32>,
    /// base-p index -> log
    log: Vec<u32>,
    /// absolute trace to F_p, by log
    trace: Vec<u32>,
}

fn digits(p: u32, mut x: u32, d: usize) -> Vec<u32> {
    let mut out = vec![0; d];
    for slot in out.iter_mut() {
        *slot = x % p;
        x /= p;
    }
    out
}

fn undigits(p: u32, v: &[u32]) -> u32 {
    v.iter().rev().fold(0, |acc, &a| acc * p + a)
}

/// cur·(T + c) modulo the monic P.
fn mul_linear(f: PrimeField, cur: &mut [u32], c: u32, modulus: &[u32]) {
    let d = cur.len();
    let top = cur[d - 1];
    for i in (1..d).rev() {
        cur[i] = f.add(cur[i - 1], f.mul(c, cur[i]));
    }
    cur[0] = f.mul(c, cur[0]);
    if top != 0 {
        for (slot, &m) in cur.iter_mut().zip(modulus) {
            *slot = f.sub(*slot, f.mul(top, m));
        }
    }
}

/// Product of two residues (digit vectors of length d) modulo the monic P.
fn mul_digits(f: PrimeField, a: &[u32], b: &[u32], modulus: &[u32]) -> Vec<u32> {
    let d = a.len();
    let mut prod = vec![0u32; 2 * d];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = f.add(prod[i + j], f.mul(x, y));
        }
    }
    for k in (d..2 * d).rev() {
        let c = prod[k];
        if c == 0 {
            continue;
        }
        // T^d = -Σ modulus[i] T^i
        for (i, &m) in modulus.iter().take(d).enumerate() {
            prod[k - d + i] = f.sub(prod[k - d + i], f.mul(c, m));
        }
        prod[k] = 0;
    }
    prod.truncate(d);
    prod
}

impl ZechField {
    /// Field tables for a monic irreducible P with p^{deg P} < 2^31.
    pub fn new(modulus: &Poly) -> Result<Self> {
        let f = modulus.field();
        let p = f.p();
        let d = modulus.deg().filter(|&d| d >= 1).ok_or_else(|| Error::InvalidInput("constant modulus".into()))?;
        let size = (p as u64).pow(d as u32);
        if size >= 1 << 31 {
            return Err(Error::CapExceeded(format!("residue field of size {size}")));
        }
        let size = size as u32;
        let m = modulus.monic();
        let mc: Vec<u32> = (0..=d).map(|i| m.coeff(i)).collect();
        let order = size - 1;
        let mut exp = vec![0u32; order as usize];
        let mut log = vec![ZERO; size as usize];
        // a primitive element, T + c first (cheap to multiply by)
        let mut primes_of_order = Vec::new();
        let mut rest = order;
        let mut r = 2;
        while r * r <= rest {
            if rest.is_multiple_of(r) {
                primes_of_order.push(r);
                while rest.is_multiple_of(r) {
                    rest /= r;
                }
            }
            r += 1;
        }
        if rest > 1 {
            primes_of_order.push(rest);
        }
        let is_primitive = |x: &Poly| {
            !x.rem(&m).is_zero() && primes_of_order.iter().all(|&r| !x.pow_mod((order / r) as u64, &m).is_one())
        };
        let linear = (0..p).filter(|_| d > 1).map(|c| c + p);
        let others = (1..size).filter(|&x| d == 1 || x < p || x >= 2 * p);
        let gen = linear.chain(others).find(|&c| is_primitive(&Poly::from_index(f, c as u64)));
        let mut found = gen.is_some();
        if let Some(cand) = gen {
            let g = digits(p, cand, d);
            let is_linear = d > 1 && g[1] == 1 && g[2..].iter().all(|&x| x == 0);
            let binary_linear = p == 2 && is_linear;
            let mbits = undigits(2, &mc) as u64;
            let mut bits = 1u64;
            let mut cur = digits(p, 1, d);
            for k in 0..order {
                let idx = if binary_linear { bits as u32 } else { undigits(p, &cur) };
                if log[idx as usize] != ZERO {
                    // only possible when the modulus is reducible
                    found = false;
                    break;
                }
                log[idx as usize] = k;
                exp[k as usize] = idx;
                if binary_linear {
                    // multiply by T or T + 1 on the bit pattern
                    let mut next = (bits << 1) ^ if cand == 3 { bits } else { 0 };
                    if next >> d & 1 == 1 {
                        next ^= mbits;
                    }
                    bits = next;
                } else if is_linear {
                    mul_linear(f, &mut cur, g[0], &mc);
                } else {
                    cur = mul_digits(f, &cur, &g, &mc);
                }
            }
        }
        if !found {
            return Err(Error::InvalidInput(format!("{modulus} is not irreducible")));
        }
        // Tr(T^i) from Newton's identities on the modulus: power sums of the roots
        let mut power_sums = vec![0u32; d];
        for i in 0..d {
            // s_i + e-terms: for monic x^d + c_{d-1}x^{d-1} + ..., s_k = -(k c_{d-k} + Σ_{j<k} c_{d-k+j} s_j)
            if i == 0 {
                power_sums[0] = f.reduce(d as i64);
                continue;
            }
            let mut acc = f.mul(f.reduce(i as i64), mc[d - i]);
            for j in 1..i {
                acc = f.add(acc, f.mul(mc[d - i + j], power_sums[j]));
            }
            power_sums[i] = f.neg(acc);
        }
        let trace = if p == 2 {
            let mask = undigits(2, &power_sums);
            exp.iter().map(|&idx| (idx & mask).count_ones() & 1).collect()
        } else {
            exp.iter()
                .map(|&idx| {
                    let (mut x, mut t) = (idx, 0u32);
                    for &s in &power_sums {
                        t += (x % p) * s;
                        x /= p;
                    }
                    t % p
                })
                .collect()
        };
        let one_plus = |k: u32| -> u32 {
            if p == 2 {
                return log[(exp[k as usize] ^ 1) as usize];
            }
            let idx = exp[k as usize];
            let d0 = idx % p;
            log[(idx - d0 + (d0 + 1) % p) as usize]
        };
        let zech = (0..order).map(one_plus).collect();
        Ok(Self { p, size, zech, exp, log, trace })
    }

    pub fn size(&self) -> u32 {
        self.size
    }

    pub fn order(&self) -> u32 {
        self.size - 1
    }

    /// Log of a residue given as a polynomial.
    pub fn from_poly(&self, a: &Poly, modulus: &Poly) -> u32 {
        self.log[a.rem(modulus).to_index() as usize]
    }

    pub fn from_int(&self, a: i64) -> u32 {
        let r = a.rem_euclid(self.p as i64) as u32;
        self.log[r as usize]
    }

    pub fn to_index(&self, a: u32) -> u32 {
        if a == ZERO {
            0
        } else {
            self.exp[a as usize]
        }
    }

    /// Logs of all nonzero elements are 0..order; zero is [`ZERO`].
    pub fn elements(&self) -> impl Iterator<Item = u32> {
        std::iter::once(ZERO).chain(0..self.order())
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == ZERO || b == ZERO {
            return ZERO;
        }
        let s = a as u64 + b as u64;
        (s % self.order() as u64) as u32
    }

    pub fn inv(&self, a: u32) -> u32 {
        assert!(a != ZERO, "inverse of zero");
        (self.order() - a) % self.order()
    }

    pub fn neg(&self, a: u32) -> u32 {
        if a == ZERO || self.p == 2 {
            return a;
        }
        // -1 = g^{order/2}
        self.mul(a, self.order() / 2)
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        if a == ZERO {
            return b;
        }
        if b == ZERO {
            return a;
        }
        let n = self.order();
        let k = (b + n - a) % n;
        let z = self.zech[k as usize];
        if z == ZERO {
            ZERO
        } else {
            self.mul(a, z)
        }
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    pub fn trace(&self, a: u32) -> u32 {
        if a == ZERO {
            0
        } else {
            self.trace[a as usize]
        }
    }

    /// Quadratic character (odd p): 0, 1 or -1.
    pub fn chi(&self, a: u32) -> i64 {
        match a {
            ZERO => 0,
            a if a % 2 == 0 => 1,
            _ => -1,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn agrees_with_polynomial_arithmetic() {
        for (p, m) in [(2, "T^4+T+1"), (3, "T^3+2*T+1"), (5, "T^2+2"), (2, "T^5+T^2+1"), (3, "T")] {
            let f = PrimeField::new(p).unwrap();
            let m = Poly::parse(f, m).unwrap();
            let z = ZechField::new(&m).unwrap();
            let size = z.size() as u64;
            for i in 0..size.min(40) {
                for j in 0..size.min(40) {
                    let (a, b) = (Poly::from_index(f, i), Poly::from_index(f, j));
                    let (la, lb) = (z.from_poly(&a, &m), z.from_poly(&b, &m));
                    assert_eq!(z.to_index(z.add(la, lb)) as u64, (&a + &b).rem(&m).to_index());
                    assert_eq!(z.to_index(z.mul(la, lb)) as u64, (&a * &b).rem(&m).to_index());
                    assert_eq!(z.to_index(z.sub(la, lb)) as u64, (&a - &b).rem(&m).to_index());
                }
            }
            // trace is the sum of Frobenius conjugates
            let d = m.deg().unwrap() as u64;
            for i in 0..size.min(40) {
                let a = Poly::from_index(f, i);
                let mut t = Poly::zero(f);
                let mut c = a.clone();
                for _ in 0..d {
                    t = &t + &c;
                    c = c.pow_mod(p as u64, &m);
                }
                let t = t.rem(&m);
                assert!(t.deg().unwrap_or(0) == 0);
                assert_eq!(z.trace(z.from_poly(&a, &m)), t.coeff(0));
            }
        }
    }
}
