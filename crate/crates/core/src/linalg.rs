//! Dense linear algebra over a [`Field`]: reduced row echelon form, rank, kernels.

use crate::field::Field;

/// Reduced row echelon form with the pivot column of each nonzero row.
#[derive(Clone, Debug)]
pub struct Echelon<E> {
    pub rows: Vec<Vec<E>>,
    pub pivots: Vec<usize>,
}

#[allow(clippy::needless_range_loop)]
pub fn row_reduce<K: Field>(field: &K, rows: &[Vec<K::Elem>], ncols: usize) -> Echelon<K::Elem> {
    let mut m: Vec<Vec<K::Elem>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        let Some(piv) = (r..m.len()).find(|&i| !field.is_zero(&m[i][col])) else {
            continue;
        };
        m.swap(r, piv);
        let inv = field.inv(&m[r][col]).expect("nonzero pivot");
        for x in m[r].iter_mut() {
            *x = field.mul(x, &inv);
        }
        for i in 0..m.len() {
            if i != r && !field.is_zero(&m[i][col]) {
                let factor = m[i][col].clone();
                for j in 0..ncols {
                    let t = field.mul(&factor, &m[r][j]);
                    m[i][j] = field.sub(&m[i][j], &t);
                }
            }
        }
        pivots.push(col);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    Echelon { rows: m, pivots }
}

pub fn rank<K: Field>(field: &K, rows: &[Vec<K::Elem>], ncols: usize) -> usize {
    row_reduce(field, rows, ncols).pivots.len()
}

/// A basis of `{x : rows * x = 0}`, one vector per free column.
pub fn kernel_basis<K: Field>(field: &K, rows: &[Vec<K::Elem>], ncols: usize) -> Vec<Vec<K::Elem>> {
    let ech = row_reduce(field, rows, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !ech.pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![field.zero(); ncols];
            v[fc] = field.one();
            for (row, &pc) in ech.rows.iter().zip(&ech.pivots) {
                v[pc] = field.neg(&row[fc]);
            }
            v
        })
        .collect()
}
