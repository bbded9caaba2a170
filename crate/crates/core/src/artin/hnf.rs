/// Upper-triangular Hermite normal form of a full-rank integer lattice.
///
/// Row `j` of the result has zeros before column `j`, a positive pivot at
/// column `j`, and every entry above a pivot is reduced into `[0, pivot)`.
/// Returns `None` if the rows do not span a full-rank sublattice of `Z^dim`.
pub(crate) fn hermite_normal_form(mut pool: Vec<Vec<i128>>, dim: usize) -> Option<Vec<Vec<i128>>> {
    let mut basis: Vec<Vec<i128>> = Vec::with_capacity(dim);
    for col in 0..dim {
        loop {
            pool.retain(|r| r.iter().any(|&x| x != 0));
            let Some(pivot) = (0..pool.len())
                .filter(|&i| pool[i][col] != 0)
                .min_by_key(|&i| pool[i][col].abs())
            else {
                return None;
            };
            let pivot_row = pool[pivot].clone();
            let mut done = true;
            for (i, row) in pool.iter_mut().enumerate() {
                if i == pivot || row[col] == 0 {
                    continue;
                }
                let q = row[col].div_euclid(pivot_row[col]);
                for k in col..dim {
                    row[k] -= q * pivot_row[k];
                }
                if row[col] != 0 {
                    done = false;
                }
            }
            if done {
                let mut row = pool.swap_remove(pivot);
                if row[col] < 0 {
                    row.iter_mut().for_each(|x| *x = -*x);
                }
                basis.push(row);
                break;
            }
        }
    }
    for j in (0..dim).rev() {
        for i in 0..j {
            let q = basis[i][j].div_euclid(basis[j][j]);
            if q != 0 {
                let pivot = basis[j].clone();
                for k in j..dim {
                    basis[i][k] -= q * pivot[k];
                }
            }
        }
    }
    Some(basis)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_lattice() {
        let h = hermite_normal_form(vec![vec![0, 25], vec![5, 0]], 2).unwrap();
        assert_eq!(h, vec![vec![5, 0], vec![0, 25]]);
    }

    #[test]
    fn mixed_lattice() {
        // span{(2, 1), (0, 3)} has index 6
        let h = hermite_normal_form(vec![vec![2, 1], vec![4, 5]], 2).unwrap();
        assert_eq!(h[0][0] * h[1][1], 6);
        assert_eq!(h[1][0], 0);
        assert!(h[0][1] >= 0 && h[0][1] < h[1][1]);
    }

    #[test]
    fn rank_deficient() {
        assert!(hermite_normal_form(vec![vec![1, 1], vec![2, 2]], 2).is_none());
    }
}
