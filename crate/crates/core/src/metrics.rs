//! Entropy, mutual information and the variation-of-information distance
//! between clusterings, plus the joint entropy of several clusterings.
//!
//! Natural logarithms throughout, so every bound is in nats (`0 <= d <= ln n`).

use std::collections::HashMap;
use std::sync::Arc;

use crate::clustering::Clustering;
use crate::error::{Error, Result};

/// Nonempty product cells allowed before [`setwise_information`] refuses.
pub const SETWISE_CELL_CAP: usize = 1_000_000;

/// Co-occurrence counts `|A_k ∩ B_l|` of two clusterings.
#[derive(Debug, Clone)]
pub struct ContingencyTable {
    rows: Vec<usize>,
    cols: Vec<usize>,
    // nonzero cells (k, l, count) in row-major order
    cells: Vec<(usize, usize, usize)>,
    n: usize,
}

impl ContingencyTable {
    pub fn new(a: &Clustering, b: &Clustering) -> Result<Self> {
        let b = a.align_other(b)?;
        let (ka, kb) = (a.n_clusters(), b.n_clusters());
        let n = a.len();
        let cells = if ka.saturating_mul(kb) <= (1 << 20).max(4 * n) {
            let mut dense = vec![0usize; ka * kb];
            for (&x, &y) in a.labels().iter().zip(b.labels()) {
                dense[x * kb + y] += 1;
            }
            dense
                .iter()
                .enumerate()
                .filter(|(_, &c)| c > 0)
                .map(|(i, &c)| (i / kb, i % kb, c))
                .collect()
        } else {
            let mut pairs: Vec<(usize, usize)> =
                a.labels().iter().copied().zip(b.labels().iter().copied()).collect();
            pairs.sort_unstable();
            let mut cells: Vec<(usize, usize, usize)> = Vec::new();
            for p in pairs {
                match cells.last_mut() {
                    Some(last) if (last.0, last.1) == p => last.2 += 1,
                    _ => cells.push((p.0, p.1, 1)),
                }
            }
            cells
        };
        Ok(ContingencyTable {
            rows: a.sizes(),
            cols: b.sizes(),
            cells,
            n,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn row_sums(&self) -> &[usize] {
        &self.rows
    }

    pub fn col_sums(&self) -> &[usize] {
        &self.cols
    }

    pub fn cells(&self) -> &[(usize, usize, usize)] {
        &self.cells
    }

    fn mutual_information(&self) -> f64 {
        let n = self.n as f64;
        self.cells
            .iter()
            .map(|&(k, l, c)| {
                let joint = c as f64;
                (joint / n) * (joint * n / (self.rows[k] as f64 * self.cols[l] as f64)).ln()
            })
            .sum::<f64>()
            .max(0.0)
    }

    // sum_kl p_kl [ln(p_k / p_kl) + ln(p_l / p_kl)]: every term is >= 0 and the
    // identical-partition case is exactly zero. Terms are summed in sorted
    // order so swapping the arguments gives the same bits.
    fn variation_of_information(&self) -> f64 {
        let n = self.n as f64;
        let mut terms: Vec<f64> = self
            .cells
            .iter()
            .map(|&(k, l, c)| {
                let joint = c as f64;
                (joint / n)
                    * ((self.rows[k] as f64 / joint).ln() + (self.cols[l] as f64 / joint).ln())
            })
            .collect();
        terms.sort_unstable_by(f64::total_cmp);
        terms.iter().sum()
    }
}

fn entropy_of_sizes(sizes: impl IntoIterator<Item = usize>, n: usize) -> f64 {
    let n = n as f64;
    sizes
        .into_iter()
        .filter(|&s| s > 0)
        .map(|s| {
            let p = s as f64 / n;
            -p * p.ln()
        })
        .sum()
}

/// Shannon entropy of the cluster-size distribution.
pub fn entropy(c: &Clustering) -> f64 {
    if c.is_empty() {
        return 0.0;
    }
    entropy_of_sizes(c.sizes(), c.len())
}

pub fn mutual_information(a: &Clustering, b: &Clustering) -> Result<f64> {
    Ok(ContingencyTable::new(a, b)?.mutual_information())
}

/// `H(a) + H(b) - 2 I(a, b)`.
pub fn vi_distance(a: &Clustering, b: &Clustering) -> Result<f64> {
    Ok(ContingencyTable::new(a, b)?.variation_of_information())
}

/// Joint entropy of the partition formed by intersecting every clustering.
pub fn setwise_information(cs: &[&Clustering]) -> Result<f64> {
    let cells = product_partition(cs)?;
    Ok(entropy(&cells))
}

/// Intersection of all clusterings, over the first one's node order.
pub fn product_partition(cs: &[&Clustering]) -> Result<Clustering> {
    let first = *cs
        .first()
        .ok_or_else(|| Error::InvalidParameter("at least one clustering is required".into()))?;
    let mut current: Vec<usize> = first.labels().to_vec();
    let mut count = first.n_clusters();
    for c in &cs[1..] {
        let c = first.align_other(c)?;
        let mut ids: HashMap<(usize, usize), usize> = HashMap::new();
        for (cur, &l) in current.iter_mut().zip(c.labels()) {
            let next = ids.len();
            *cur = *ids.entry((*cur, l)).or_insert(next);
        }
        count = ids.len();
        if count > SETWISE_CELL_CAP {
            return Err(Error::LimitExceeded(format!(
                "product partition has more than {SETWISE_CELL_CAP} cells; \
                 use the greedy max-min ordering instead"
            )));
        }
    }
    debug_assert!(count <= first.len());
    Clustering::from_labels(Arc::clone(first.nodes()), &current)
}

/// Pairwise VI distances; symmetric with a zero diagonal.
pub fn vi_matrix(cs: &[&Clustering]) -> Result<Vec<Vec<f64>>> {
    let n = cs.len();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let dist = |&(i, j): &(usize, usize)| vi_distance(cs[i], cs[j]);
    #[cfg(feature = "parallel")]
    let values: Vec<f64> = {
        use rayon::prelude::*;
        pairs.par_iter().map(dist).collect::<Result<_>>()?
    };
    #[cfg(not(feature = "parallel"))]
    let values: Vec<f64> = pairs.iter().map(dist).collect::<Result<_>>()?;

    let mut m = vec![vec![0.0; n]; n];
    for (&(i, j), d) in pairs.iter().zip(values) {
        m[i][j] = d;
        m[j][i] = d;
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nodes::NodeSet;

    fn c(labels: &[u32]) -> Clustering {
        Clustering::from_labels(NodeSet::numbered(labels.len()).shared(), labels).unwrap()
    }

    #[test]
    fn entropy_examples() {
        assert_eq!(entropy(&c(&[0, 0, 0, 0])), 0.0);
        assert!((entropy(&c(&[0, 1, 2, 3])) - 4f64.ln()).abs() < 1e-15);
        let expected = -(0.75f64 * 0.75f64.ln()) - 0.25 * 0.25f64.ln();
        assert!((entropy(&c(&[0, 0, 0, 1])) - expected).abs() < 1e-15);
        assert!((expected - 0.5623).abs() < 1e-4);
    }

    #[test]
    fn mutual_information_examples() {
        let ab_cd = c(&[0, 0, 1, 1]);
        let ac_bd = c(&[0, 1, 0, 1]);
        let abc_d = c(&[0, 0, 0, 1]);
        assert!((mutual_information(&ab_cd, &ab_cd).unwrap() - entropy(&ab_cd)).abs() < 1e-15);
        assert!(mutual_information(&ab_cd, &ac_bd).unwrap().abs() < 1e-15);
        // cells: {a,b} 2/4, {c} 1/4, {d} 1/4 against marginals (1/2,1/2) x (3/4,1/4)
        let expected = 0.5 * (0.5f64 / (0.5 * 0.75)).ln()
            + 0.25 * (0.25f64 / (0.5 * 0.75)).ln()
            + 0.25 * (0.25f64 / (0.5 * 0.25)).ln();
        let got = mutual_information(&ab_cd, &abc_d).unwrap();
        assert!((got - expected).abs() < 1e-15);
        assert!((got - 0.2158).abs() < 1e-4);
    }

    #[test]
    fn vi_examples() {
        let ab_cd = c(&[0, 0, 1, 1]);
        let ac_bd = c(&[0, 1, 0, 1]);
        assert_eq!(vi_distance(&ab_cd, &c(&[5, 5, 2, 2])).unwrap(), 0.0);
        assert!((vi_distance(&ab_cd, &ac_bd).unwrap() - 2.0 * 2f64.ln()).abs() < 1e-15);
        let d = vi_distance(&c(&[0, 1, 2, 3]), &c(&[0, 0, 0, 0])).unwrap();
        assert!((d - 4f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn node_set_mismatch() {
        let err = vi_distance(&c(&[0, 0, 1]), &c(&[0, 1])).unwrap_err();
        assert!(matches!(err, Error::NodeSetMismatch(_)));
    }

    #[test]
    fn setwise_examples() {
        let ab_cd = c(&[0, 0, 1, 1]);
        let ac_bd = c(&[0, 1, 0, 1]);
        assert!((setwise_information(&[&ab_cd]).unwrap() - entropy(&ab_cd)).abs() < 1e-15);
        let both = setwise_information(&[&ab_cd, &ac_bd]).unwrap();
        assert!((both - 4f64.ln()).abs() < 1e-15);
        let dup = setwise_information(&[&ab_cd, &ac_bd, &ab_cd]).unwrap();
        assert_eq!(dup, both);
        assert!(setwise_information(&[]).is_err());
    }

    #[test]
    fn sparse_contingency_path_matches_dense() {
        // many clusters on both sides forces the sorted path
        let n = 3000;
        let a: Vec<usize> = (0..n).map(|i| i / 2).collect();
        let b: Vec<usize> = (0..n).map(|i| (i + 1) / 2).collect();
        let nodes = NodeSet::numbered(n).shared();
        let a = Clustering::from_labels(nodes.clone(), &a).unwrap();
        let b = Clustering::from_labels(nodes, &b).unwrap();
        let t = ContingencyTable::new(&a, &b).unwrap();
        assert!(a.n_clusters() * b.n_clusters() > 4 * n);
        assert_eq!(t.cells().iter().map(|c| c.2).sum::<usize>(), n);
        let via_h = entropy(&a) + entropy(&b) - 2.0 * mutual_information(&a, &b).unwrap();
        assert!((vi_distance(&a, &b).unwrap() - via_h).abs() < 1e-9);
    }

    #[test]
    fn matrix_is_symmetric_with_zero_diagonal() {
        let cs = [c(&[0, 0, 1, 1]), c(&[0, 1, 0, 1]), c(&[0, 0, 0, 1])];
        let refs: Vec<&Clustering> = cs.iter().collect();
        let m = vi_matrix(&refs).unwrap();
        for i in 0..3 {
            assert_eq!(m[i][i], 0.0);
            for j in 0..3 {
                assert_eq!(m[i][j], m[j][i]);
                assert_eq!(m[i][j], vi_distance(&cs[i], &cs[j]).unwrap());
            }
        }
        assert_eq!(vi_matrix(&refs[..1]).unwrap(), vec![vec![0.0]]);
    }
}
