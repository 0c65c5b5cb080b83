use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use num_integer::Integer;
use serde::Serialize;

use super::tate::{reduction_type, Place, ReductionKind};
use super::zech::{ZechField, ZERO};
use super::WeierstrassCurve;
use crate::error::{Error, Result};
use crate::ff_base::{irreducibles_with_condition, is_irreducible_fast, Poly};
use crate::par::Exec;

/// Number of points of the reduction mod P over F_P, with the point at infinity.
/// If P divides the discriminant of the model, the singular point is left out.
pub fn count_points(e: &WeierstrassCurve, p: &Poly) -> Result<u64> {
    if !p.is_monic() || !is_irreducible_fast(p) {
        return Err(Error::InvalidInput(format!("{p} is not a monic irreducible")));
    }
    let k = ZechField::new(p)?;
    let a: Vec<u32> = e.a.iter().map(|c| k.from_poly(c, p)).collect();
    let (a1, a2, a3, a4, a6) = (a[0], a[1], a[2], a[3], a[4]);
    let char2 = e.field().p() == 2;
    let four = k.from_int(4);
    let mut affine: i64 = 0;
    for x in k.elements() {
        let x2 = k.mul(x, x);
        let h = k.add(k.mul(a1, x), a3);
        let g = k.add(k.add(k.mul(x2, x), k.mul(a2, x2)), k.add(k.mul(a4, x), a6));
        affine += if char2 {
            if h == ZERO {
                1
            } else {
                // y = hz: z² + z = g/h²
                let z = k.mul(g, k.inv(k.mul(h, h)));
                if k.trace(z) == 0 {
                    2
                } else {
                    0
                }
            }
        } else {
            1 + k.chi(k.add(k.mul(h, h), k.mul(four, g)))
        };
    }
    let singular = p.divides(&e.invariants().discriminant) as i64;
    Ok((affine + 1 - singular) as u64)
}

/// On-disk cache of point counts for one curve: `<dir>/<curve key>.json`, a map from
/// P to #Ē(F_P). Entries are never overwritten; the file is replaced atomically.
#[derive(Debug)]
pub struct PointCache {
    path: Option<PathBuf>,
    entries: Mutex<BTreeMap<String, u64>>,
    dirty: Mutex<bool>,
}

impl PointCache {
    pub fn in_memory() -> Self {
        Self { path: None, entries: Mutex::new(BTreeMap::new()), dirty: Mutex::new(false) }
    }

    pub fn open(dir: &Path, e: &WeierstrassCurve) -> Result<Self> {
        fs::create_dir_all(dir)?;
        let path = dir.join(format!("points-{}.json", e.key()));
        let entries = match fs::read_to_string(&path) {
            Ok(s) => serde_json::from_str(&s)?,
            Err(err) if err.kind() == std::io::ErrorKind::NotFound => BTreeMap::new(),
            Err(err) => return Err(err.into()),
        };
        Ok(Self { path: Some(path), entries: Mutex::new(entries), dirty: Mutex::new(false) })
    }

    pub fn len(&self) -> usize {
        self.entries.lock().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, p: &Poly) -> Option<u64> {
        self.entries.lock().unwrap().get(&p.to_string()).copied()
    }

    pub fn insert(&self, p: &Poly, count: u64) -> Result<()> {
        let mut map = self.entries.lock().unwrap();
        match map.get(&p.to_string()) {
            Some(&old) if old != count => {
                Err(Error::Consistency(format!("cached count {old} at {p} disagrees with {count}")))
            }
            Some(_) => Ok(()),
            None => {
                map.insert(p.to_string(), count);
                *self.dirty.lock().unwrap() = true;
                Ok(())
            }
        }
    }

    pub fn count(&self, e: &WeierstrassCurve, p: &Poly) -> Result<u64> {
        if let Some(c) = self.get(p) {
            return Ok(c);
        }
        let c = count_points(e, p)?;
        self.insert(p, c)?;
        Ok(c)
    }

    pub fn save(&self) -> Result<()> {
        let Some(path) = &self.path else { return Ok(()) };
        let mut dirty = self.dirty.lock().unwrap();
        if !*dirty {
            return Ok(());
        }
        let tmp = path.with_extension(format!("json.tmp{}", std::process::id()));
        fs::write(&tmp, serde_json::to_string_pretty(&*self.entries.lock().unwrap())?)?;
        fs::rename(&tmp, path)?;
        *dirty = false;
        Ok(())
    }
}

/// λ_P: q^{deg P} + 1 - #Ē(F_P) at good P, 1 split multiplicative, -1 non-split, 0 additive.
pub fn lambda_p(e: &WeierstrassCurve, p: &Poly, cache: Option<&PointCache>) -> Result<i64> {
    let red = reduction_type(e, &Place::Finite(p.clone()))?;
    Ok(match red.kind {
        ReductionKind::SplitMultiplicative => 1,
        ReductionKind::NonsplitMultiplicative => -1,
        ReductionKind::Additive => 0,
        ReductionKind::Good => {
            if p.divides(&e.invariants().discriminant) {
                return Err(Error::InvalidInput(format!("model is not minimal at {p}")));
            }
            let n = match cache {
                Some(c) => c.count(e, p)?,
                None => count_points(e, p)?,
            };
            let qd = (e.field().p() as i64).pow(p.deg().unwrap() as u32);
            qd + 1 - n as i64
        }
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct TorsionBound {
    pub bound: u64,
    pub max_degree: usize,
    /// (P, #Ē(F_P)) for every prime used
    pub counts: Vec<(String, u64)>,
    /// running gcd after each degree: (degree, gcd so far)
    pub by_degree: Vec<(usize, u64)>,
}

fn hasse_ok(q: u64, d: u32, n: u64) -> bool {
    let qd = q.pow(d) as f64;
    let a = (qd + 1.0 - n as f64).abs();
    a * a <= 4.0 * qd + 1e-6
}

/// gcd of #Ē(F_P) over monic irreducible P = 1 mod n with deg P <= max_degree and
/// P prime to the discriminant.
pub fn torsion_bound(
    e: &WeierstrassCurve,
    n: &Poly,
    max_degree: usize,
    exec: Exec,
    cache: Option<&PointCache>,
) -> Result<TorsionBound> {
    let f = e.field();
    let disc = e.invariants().discriminant;
    let primes: Vec<Poly> = irreducibles_with_condition(f, max_degree, n, &Poly::one(f))?
        .into_iter()
        .filter(|p| p.gcd(&disc).is_one())
        .collect();
    if primes.len() < 2 {
        return Err(Error::Inconclusive(format!(
            "only {} prime(s) = 1 mod {n} of degree <= {max_degree}; raise the depth",
            primes.len()
        )));
    }
    let local = PointCache::in_memory();
    let cache = cache.unwrap_or(&local);
    let counts = exec.map(&primes, |p| cache.count(e, p));
    let mut out = Vec::with_capacity(primes.len());
    let mut by_degree: Vec<(usize, u64)> = Vec::new();
    let mut g = 0u64;
    for (p, c) in primes.iter().zip(counts) {
        let c = c?;
        let d = p.deg().unwrap();
        if !hasse_ok(f.p() as u64, d as u32, c) {
            return Err(Error::Consistency(format!("#E(F_P) = {c} at P = {p} violates the Hasse bound")));
        }
        g = g.gcd(&c);
        match by_degree.last_mut() {
            Some((dd, gg)) if *dd == d => *gg = g,
            _ => by_degree.push((d, g)),
        }
        out.push((p.to_string(), c));
    }
    cache.save()?;
    Ok(TorsionBound { bound: g, max_degree, counts: out, by_degree })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff_base::PrimeField;

    fn brute(e: &WeierstrassCurve, p: &Poly) -> u64 {
        let k = crate::ff_base::ResidueField::new(p).unwrap();
        let els: Vec<Poly> = k.elements().collect();
        let [a1, a2, a3, a4, a6] = &e.a;
        let mut n = 1;
        for x in &els {
            for y in &els {
                let lhs = &(&(y * y) + &(&(a1 * x) * y)) + &(a3 * y);
                let rhs = &(&(&(&(x * x) * x) + &(&(a2 * x) * x)) + &(a4 * x)) + a6;
                if k.reduce(&(&lhs - &rhs)).is_zero() {
                    n += 1;
                }
            }
        }
        n
    }

    #[test]
    fn counts_match_brute_force() {
        for (q, c, ps) in [
            (2, "a1=T;a6=T^2", vec!["T+1", "T^2+T+1", "T^3+T+1", "T^4+T+1"]),
            (3, "a2=T^2+T;a4=T^2", vec!["T+1", "T^2+1", "T^2+T+2", "T^3+2*T+1"]),
            (5, "a4=T;a6=1", vec!["T+1", "T^2+2"]),
        ] {
            let f = PrimeField::new(q).unwrap();
            let e = WeierstrassCurve::parse(f, c).unwrap();
            for p in ps {
                let p = Poly::parse(f, p).unwrap();
                assert_eq!(count_points(&e, &p).unwrap(), brute(&e, &p), "{c} mod {p}");
            }
        }
    }

    #[test]
    fn eigenvalues_of_the_examples() {
        let f = PrimeField::new(2).unwrap();
        let e = WeierstrassCurve::parse(f, "a1=T;a6=T^2").unwrap();
        let l = |s: &str| lambda_p(&e, &Poly::parse(f, s).unwrap(), None).unwrap();
        assert_eq!((l("T+1"), l("T^2+T+1"), l("T^3+T+1"), l("T")), (-1, 1, -3, 0));
        let f = PrimeField::new(3).unwrap();
        let e = WeierstrassCurve::parse(f, "a2=T^2+T;a4=T^2").unwrap();
        let l = |s: &str| lambda_p(&e, &Poly::parse(f, s).unwrap(), None).unwrap();
        assert_eq!((l("T+1"), l("T+2"), l("T^2+1"), l("T^2+T+2")), (0, -1, 2, -2));
    }

    #[test]
    fn cache_round_trip() {
        let dir = std::env::temp_dir().join(format!("modpar-cache-test-{}", std::process::id()));
        let f = PrimeField::new(3).unwrap();
        let e = WeierstrassCurve::parse(f, "a2=T^2+T;a4=T^2").unwrap();
        let p = Poly::parse(f, "T^2+1").unwrap();
        {
            let c = PointCache::open(&dir, &e).unwrap();
            c.count(&e, &p).unwrap();
            c.save().unwrap();
        }
        let c = PointCache::open(&dir, &e).unwrap();
        assert_eq!(c.get(&p), Some(count_points(&e, &p).unwrap()));
        assert!(c.insert(&p, 9999).is_err());
        fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn small_torsion_bounds() {
        let f = PrimeField::new(3).unwrap();
        let e = WeierstrassCurve::parse(f, "a2=T^2+T;a4=T^2").unwrap();
        let n = Poly::parse(f, "T^3-T^2").unwrap();
        let a = torsion_bound(&e, &n, 6, Exec::Parallel, None).unwrap();
        let b = torsion_bound(&e, &n, 6, Exec::Sequential, None).unwrap();
        assert_eq!(a.bound, b.bound);
        // monotone in the depth
        let c = torsion_bound(&e, &n, 7, Exec::Parallel, None).unwrap();
        assert_eq!(a.bound % c.bound, 0);
        assert!(torsion_bound(&e, &n, 3, Exec::Parallel, None).is_err());
    }
}
