//! Smith normal form over the integers with checked arithmetic.

use serde::Serialize;

use super::PresentationError;

/// Diagonal of the Smith normal form: `min(rows, cols)` entries, each dividing
/// the next, zeros last.
pub fn smith_normal_form(m: &[Vec<i64>]) -> Result<Vec<u64>, PresentationError> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let k = rows.min(cols);
    for t in 0..k {
        loop {
            // smallest nonzero entry of the trailing block becomes the pivot
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if a[i][j] != 0 && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return finish(&a, k);
            };
            a.swap(t, pi);
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
            let p = a[t][t];
            let mut clean = true;
            for i in t + 1..rows {
                let q = a[i][t] / p;
                if q != 0 {
                    for j in t..cols {
                        a[i][j] = sub_mul(a[i][j], q, a[t][j])?;
                    }
                }
                clean &= a[i][t] == 0;
            }
            for j in t + 1..cols {
                let q = a[t][j] / p;
                if q != 0 {
                    for row in a.iter_mut().skip(t) {
                        row[j] = sub_mul(row[j], q, row[t])?;
                    }
                }
                clean &= a[t][j] == 0;
            }
            if !clean {
                continue;
            }
            // divisibility: fold an offending row into the pivot row
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| a[i][j] % p != 0));
            match bad {
                Some(i) => {
                    for j in t..cols {
                        a[t][j] = a[t][j].checked_add(a[i][j]).ok_or(PresentationError::Overflow)?;
                    }
                }
                None => break,
            }
        }
    }
    finish(&a, k)
}

fn sub_mul(x: i128, q: i128, y: i128) -> Result<i128, PresentationError> {
    q.checked_mul(y)
        .and_then(|qy| x.checked_sub(qy))
        .ok_or(PresentationError::Overflow)
}

fn finish(a: &[Vec<i128>], k: usize) -> Result<Vec<u64>, PresentationError> {
    (0..k)
        .map(|i| u64::try_from(a[i][i].unsigned_abs()).map_err(|_| PresentationError::Overflow))
        .collect()
}

/// The abelianized group `Z^free_rank ⊕ ⊕ Z/torsion_i`, torsion factors `> 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AbelianInvariants {
    pub torsion: Vec<u64>,
    pub free_rank: usize,
}

impl AbelianInvariants {
    pub fn of_matrix(m: &[Vec<i64>], cols: usize) -> Result<Self, PresentationError> {
        let d = smith_normal_form(m)?;
        let rank = d.iter().filter(|&&x| x != 0).count();
        Ok(AbelianInvariants {
            torsion: d.into_iter().filter(|&x| x > 1).collect(),
            free_rank: cols - rank,
        })
    }

    pub fn is_trivial(&self) -> bool {
        self.torsion.is_empty() && self.free_rank == 0
    }
}
