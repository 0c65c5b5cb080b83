//! Exact integer and rational linear algebra on small dense matrices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type IntVec = Vec<BigInt>;

pub fn to_big(v: &[i64]) -> IntVec {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

/// A Z-basis of {x ∈ Z^n : A·x = 0}, in row Hermite normal form.
///
/// Column operations on A are mirrored on a unimodular U; the columns of U past the
/// rank span the integer kernel, which is therefore saturated.
pub fn integer_kernel(a: &[IntVec], n: usize) -> Vec<IntVec> {
    let m = a.len();
    // work on columns: cols[j][i] = A[i][j]
    let mut cols: Vec<IntVec> = (0..n).map(|j| (0..m).map(|i| a[i][j].clone()).collect()).collect();
    let mut u: Vec<IntVec> = (0..n)
        .map(|j| (0..n).map(|i| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    let mut r = 0;
    for i in 0..m {
        if r == n {
            break;
        }
        // gcd-combine all columns r.. into column r on row i
        for j in r + 1..n {
            if cols[j][i].is_zero() {
                continue;
            }
            if cols[r][i].is_zero() {
                cols.swap(r, j);
                u.swap(r, j);
                continue;
            }
            let (x, y) = (cols[r][i].clone(), cols[j][i].clone());
            let e = x.extended_gcd(&y);
            let (g, s, t) = (e.gcd, e.x, e.y);
            let (xg, yg) = (&x / &g, &y / &g);
            // [col_r, col_j] ← [s·col_r + t·col_j, -yg·col_r + xg·col_j]; determinant s·xg + t·yg = 1
            let combine = |v: &mut Vec<IntVec>| {
                let (cr, cj) = (v[r].clone(), v[j].clone());
                v[r] = cr.iter().zip(&cj).map(|(p, q)| &s * p + &t * q).collect();
                v[j] = cr.iter().zip(&cj).map(|(p, q)| -&yg * p + &xg * q).collect();
            };
            combine(&mut cols);
            combine(&mut u);
        }
        if !cols[r][i].is_zero() {
            r += 1;
        }
    }
    let kernel: Vec<IntVec> = u[r..].to_vec();
    row_hnf(kernel)
}

/// Row Hermite normal form: echelon, positive pivots, entries above pivots reduced
/// into [0, pivot). Zero rows are dropped.
pub fn row_hnf(mut rows: Vec<IntVec>) -> Vec<IntVec> {
    if rows.is_empty() {
        return rows;
    }
    let n = rows[0].len();
    let mut r = 0;
    for c in 0..n {
        if r == rows.len() {
            break;
        }
        loop {
            // smallest nonzero |entry| in column c among rows r..
            let piv = (r..rows.len()).filter(|&i| !rows[i][c].is_zero()).min_by_key(|&i| rows[i][c].abs());
            let Some(p) = piv else { break };
            rows.swap(r, p);
            let mut done = true;
            for i in r + 1..rows.len() {
                if rows[i][c].is_zero() {
                    continue;
                }
                let qt = rows[i][c].div_floor(&rows[r][c]);
                let pr = rows[r].clone();
                for (x, y) in rows[i].iter_mut().zip(&pr) {
                    *x -= &qt * y;
                }
                if !rows[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if r < rows.len() && !rows[r][c].is_zero() {
            if rows[r][c].is_negative() {
                for x in rows[r].iter_mut() {
                    *x = -x.clone();
                }
            }
            for i in 0..r {
                let qt = rows[i][c].div_floor(&rows[r][c]);
                if qt.is_zero() {
                    continue;
                }
                let pr = rows[r].clone();
                for (x, y) in rows[i].iter_mut().zip(&pr) {
                    *x -= &qt * y;
                }
            }
            r += 1;
        }
    }
    rows.truncate(r);
    rows.retain(|row| row.iter().any(|x| !x.is_zero()));
    rows
}

/// Coordinates of v in a basis given in row echelon form, or `None` if v is not in
/// the rational span.
pub fn coordinates(basis: &[IntVec], v: &[BigRational]) -> Option<Vec<BigRational>> {
    let mut rest: Vec<BigRational> = v.to_vec();
    let mut out = Vec::with_capacity(basis.len());
    for b in basis {
        let p = b.iter().position(|x| !x.is_zero())?;
        let coef = &rest[p] / BigRational::from_integer(b[p].clone());
        for (x, y) in rest.iter_mut().zip(b) {
            *x -= &coef * BigRational::from_integer(y.clone());
        }
        out.push(coef);
    }
    rest.iter().all(|x| x.is_zero()).then_some(out)
}

/// gcd of the entries (0 for the zero vector).
pub fn content(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

pub fn mat_mul(a: &[Vec<BigRational>], b: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let m = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..m)
                .map(|j| row.iter().zip(b).fold(BigRational::zero(), |s, (x, brow)| s + x * &brow[j]))
                .collect()
        })
        .collect()
}

pub fn transpose<T: Clone>(a: &[Vec<T>]) -> Vec<Vec<T>> {
    let m = a.first().map_or(0, |r| r.len());
    (0..m).map(|j| a.iter().map(|r| r[j].clone()).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mat(rows: &[&[i64]]) -> Vec<IntVec> {
        rows.iter().map(|r| to_big(r)).collect()
    }

    #[test]
    fn kernel_is_saturated() {
        // x + y + z = 0 with 2x = 2y: kernel over Z spanned by (1,1,-2)
        let a = mat(&[&[1, 1, 1], &[2, -2, 0]]);
        let k = integer_kernel(&a, 3);
        assert_eq!(k, mat(&[&[1, 1, -2]]));
        // 2x + 4y = 0: saturated generator (2,-1), not (4,-2)
        let k = integer_kernel(&mat(&[&[2, 4]]), 2);
        assert_eq!(k, mat(&[&[2, -1]]));
    }

    proptest! {
        #[test]
        fn kernel_vectors_are_in_kernel(rows in prop::collection::vec(prop::collection::vec(-5i64..5, 5), 1..4)) {
            let a: Vec<IntVec> = rows.iter().map(|r| to_big(r)).collect();
            let k = integer_kernel(&a, 5);
            for v in &k {
                for r in &a {
                    let dot: BigInt = r.iter().zip(v).map(|(x, y)| x * y).sum();
                    prop_assert!(dot.is_zero());
                }
                prop_assert!(content(v).is_one());
            }
            // rank-nullity
            let rank = row_hnf(a.clone()).len();
            prop_assert_eq!(k.len() + rank, 5);
        }
    }
}
