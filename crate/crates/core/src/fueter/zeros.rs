use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::fueter::domain::Domain;
use crate::qexpr::QFunction;
use crate::quaternion::Point4;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZeroCluster {
    pub points: Vec<[f64; 4]>,
    pub centroid: [f64; 4],
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

/// Grid points of `d` where both `|f1|` and `|f2|` are at most `tol`,
/// grouped into clusters of grid neighbours (Chebyshev distance 1).
/// Points where `f` cannot be evaluated are skipped.
pub fn zero_set_scan(f: &QFunction, d: &Domain, grid_n: usize, tol: f64) -> Result<Vec<ZeroCluster>> {
    let points = d.grid(grid_n)?;
    let hits: Vec<(usize, Point4)> = points
        .par_iter()
        .enumerate()
        .filter_map(|(i, p)| {
            let v = f.eval(p).ok()?;
            (v.z1.norm() <= tol && v.z2.norm() <= tol).then_some((i, *p))
        })
        .collect();

    let n = grid_n;
    let index = |i: usize| [i / (n * n * n), (i / (n * n)) % n, (i / n) % n, i % n];
    let mut parent: Vec<usize> = (0..hits.len()).collect();
    for a in 0..hits.len() {
        let ia = index(hits[a].0);
        for b in (a + 1)..hits.len() {
            let ib = index(hits[b].0);
            if (0..4).all(|k| ia[k].abs_diff(ib[k]) <= 1) {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                if ra != rb {
                    parent[rb.max(ra)] = ra.min(rb);
                }
            }
        }
    }

    let mut clusters: Vec<(usize, Vec<[f64; 4]>)> = Vec::new();
    for (k, (_, p)) in hits.iter().enumerate() {
        let root = find(&mut parent, k);
        match clusters.iter_mut().find(|(r, _)| *r == root) {
            Some((_, pts)) => pts.push(p.coords()),
            None => clusters.push((root, vec![p.coords()])),
        }
    }
    Ok(clusters
        .into_iter()
        .map(|(_, points)| {
            let m = points.len() as f64;
            let centroid = std::array::from_fn(|k| points.iter().map(|p| p[k]).sum::<f64>() / m);
            ZeroCluster { points, centroid }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qf(s: &str) -> QFunction {
        QFunction::parse(s).unwrap()
    }

    #[test]
    fn constant_has_no_zeros() {
        assert!(zero_set_scan(&qf("1"), &Domain::cube(-1.0, 1.0), 5, 1e-6).unwrap().is_empty());
    }

    #[test]
    fn conjugate_pair_vanishes_at_origin_only() {
        let c = zero_set_scan(&qf("conj(z1) + conj(z2)*j"), &Domain::cube(-1.0, 1.0), 5, 1e-9).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].points, vec![[0.0; 4]]);
    }

    #[test]
    fn plane_is_one_cluster() {
        let f = qf("z1 + conj(z1) + z2 + conj(z2) + (-z1 - conj(z1) + z2 + conj(z2))*j");
        let c = zero_set_scan(&f, &Domain::cube(-1.0, 1.0), 5, 1e-9).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].points.len(), 25);
        assert!(c[0].points.iter().all(|p| p[0] == 0.0 && p[2] == 0.0));
    }
}
