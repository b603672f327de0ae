//! ε-nets with re-checkable certificates, and 2ε-separated packings.

use serde::Serialize;

use super::MncError;
use crate::metric::FNormMetric;
use crate::space::{PointCloud, Vector};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Assignment {
    pub center: usize,
    pub distance: f64,
}

/// An ε-net: each point of the covered cloud is assigned a center.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NetCertificate {
    pub eps: f64,
    pub centers: PointCloud,
    pub assignment: Vec<Assignment>,
    pub complete: bool,
}

impl NetCertificate {
    /// Assigns every point of `cloud` to its nearest center (lowest index on
    /// ties).
    pub fn cover(metric: &FNormMetric, cloud: &PointCloud, centers: PointCloud, eps: f64) -> Self {
        let assignment: Vec<Assignment> = cloud
            .iter()
            .map(|p| nearest(metric, &centers, p).unwrap_or(Assignment { center: 0, distance: f64::INFINITY }))
            .collect();
        let complete = assignment.iter().all(|a| a.distance <= eps);
        NetCertificate { eps, centers, assignment, complete }
    }

    /// Largest assigned distance; `0` for an empty cloud.
    pub fn radius(&self) -> f64 {
        self.assignment.iter().fold(0.0, |acc: f64, a| acc.max(a.distance))
    }

    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    /// Recomputes every assigned distance from scratch.
    pub fn verify(&self, metric: &FNormMetric, cloud: &PointCloud) -> Result<(), MncError> {
        if self.assignment.len() != cloud.len() {
            return Err(MncError::Certificate(format!(
                "{} assignments for {} points",
                self.assignment.len(),
                cloud.len()
            )));
        }
        let mut complete = true;
        for (i, (a, p)) in self.assignment.iter().zip(cloud).enumerate() {
            if a.center >= self.centers.len() {
                return Err(MncError::Certificate(format!("point {i} assigned to missing center {}", a.center)));
            }
            let d = metric.dist(self.centers.get(a.center), p);
            if d != a.distance {
                return Err(MncError::Certificate(format!(
                    "point {i}: recorded distance {} but recomputed {d}",
                    a.distance
                )));
            }
            complete &= d <= self.eps;
        }
        if complete != self.complete {
            return Err(MncError::Certificate(format!("completeness flag is {} but should be {complete}", self.complete)));
        }
        Ok(())
    }
}

pub(crate) fn nearest(metric: &FNormMetric, centers: &PointCloud, p: &Vector) -> Option<Assignment> {
    let mut best: Option<Assignment> = None;
    for (j, c) in centers.iter().enumerate() {
        let d = metric.dist(c, p);
        if best.is_none_or(|b| d < b.distance) {
            best = Some(Assignment { center: j, distance: d });
        }
    }
    best
}

/// Farthest-first traversal: indices of up to `k` points, starting at
/// `start`, each maximising the distance to those already chosen. Stops early
/// once `stop(max remaining distance)` holds.
pub(crate) fn farthest_first(
    metric: &FNormMetric,
    cloud: &PointCloud,
    start: usize,
    k: usize,
    stop: impl Fn(f64) -> bool,
) -> Vec<usize> {
    if cloud.is_empty() || k == 0 {
        return Vec::new();
    }
    let mut chosen = vec![start];
    let mut gap: Vec<f64> = cloud.iter().map(|p| metric.dist(cloud.get(start), p)).collect();
    while chosen.len() < k {
        let (far, &d) = gap
            .iter()
            .enumerate()
            .fold((0, &f64::NEG_INFINITY), |acc, (i, d)| if *d > *acc.1 { (i, d) } else { acc });
        if stop(d) {
            break;
        }
        chosen.push(far);
        for (g, p) in gap.iter_mut().zip(cloud) {
            *g = g.min(metric.dist(cloud.get(far), p));
        }
    }
    chosen
}

fn select(cloud: &PointCloud, idx: &[usize], label: &str) -> PointCloud {
    PointCloud::from_points_unchecked(
        idx.iter().map(|&i| cloud.get(i).clone()).collect(),
        cloud.dim(),
        label.to_owned(),
    )
}

/// `greedy_net`: farthest-point cover started at index 0, drawing centers
/// from the cloud until every point is within `eps`.
pub fn greedy_net(metric: &FNormMetric, cloud: &PointCloud, eps: f64) -> Result<NetCertificate, MncError> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(MncError::Eps(eps));
    }
    let idx = farthest_first(metric, cloud, 0, usize::MAX, |d| d <= eps);
    let centers = select(cloud, &idx, "net");
    Ok(NetCertificate::cover(metric, cloud, centers, eps))
}

/// A maximal 2ε-separated subset found by a scan in index order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Packing {
    pub eps: f64,
    pub indices: Vec<usize>,
    pub witness: PointCloud,
}

impl Packing {
    pub fn count(&self) -> usize {
        self.indices.len()
    }

    /// Pairwise separation `> 2ε` and maximality in `cloud`.
    pub fn verify(&self, metric: &FNormMetric, cloud: &PointCloud) -> Result<(), MncError> {
        let sep = 2.0 * self.eps;
        for (a, &i) in self.indices.iter().enumerate() {
            for &j in &self.indices[a + 1..] {
                let d = metric.dist(cloud.get(i), cloud.get(j));
                if d <= sep {
                    return Err(MncError::Certificate(format!("witnesses {i} and {j} are only {d} apart")));
                }
            }
        }
        for (i, p) in cloud.iter().enumerate() {
            if !self.indices.iter().any(|&j| metric.dist(cloud.get(j), p) <= sep) {
                return Err(MncError::Certificate(format!("point {i} could extend the packing")));
            }
        }
        Ok(())
    }
}

/// `packing_lower`.
pub fn packing_lower(metric: &FNormMetric, cloud: &PointCloud, eps: f64) -> Result<Packing, MncError> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(MncError::Eps(eps));
    }
    let sep = 2.0 * eps;
    let mut indices: Vec<usize> = Vec::new();
    for (i, p) in cloud.iter().enumerate() {
        if indices.iter().all(|&j| metric.dist(cloud.get(j), p) > sep) {
            indices.push(i);
        }
    }
    let witness = select(cloud, &indices, "packing");
    Ok(Packing { eps, indices, witness })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::ball_grid;
    use crate::space::SpaceModel;

    fn line() -> FNormMetric {
        FNormMetric::unit_gauge(&SpaceModel::c_grid(1, 1, 1.0).unwrap()).unwrap()
    }

    fn cloud(xs: &[f64]) -> PointCloud {
        PointCloud::from_coords(xs.iter().map(|&x| vec![x]).collect(), "m").unwrap()
    }

    #[test]
    fn greedy_net_examples() {
        let d = line();
        let single = cloud(&[3.0]);
        let net = greedy_net(&d, &single, 0.1).unwrap();
        assert_eq!(net.centers.points(), single.points());

        let m = cloud(&[0.0, 1.0, 2.0]);
        let net = greedy_net(&d, &m, 1.01).unwrap();
        let centers: Vec<f64> = net.centers.iter().map(|c| c.coords()[0]).collect();
        assert_eq!(centers, vec![0.0, 2.0]);
        assert!(net.complete);
        net.verify(&d, &m).unwrap();

        let s = SpaceModel::c_grid(2, 1, 1.0).unwrap();
        let g = FNormMetric::unit_gauge(&s).unwrap();
        let ball = ball_grid(&g, &Vector::zeros(2), 1.0, 5);
        let net = greedy_net(&g, &ball, 1.0).unwrap();
        assert_eq!(net.len(), 1);
        assert!(net.centers.get(0).is_zero());
    }

    #[test]
    fn empty_cloud_gives_empty_complete_net() {
        let net = greedy_net(&line(), &PointCloud::empty(1, "none"), 0.5).unwrap();
        assert!(net.is_empty() && net.complete);
        assert_eq!(net.radius(), 0.0);
    }

    #[test]
    fn certificate_tampering_is_caught() {
        let d = line();
        let m = cloud(&[0.0, 1.0, 2.0]);
        let mut net = greedy_net(&d, &m, 1.01).unwrap();
        net.assignment[1].distance = 0.5;
        assert!(net.verify(&d, &m).is_err());
        let mut net = greedy_net(&d, &m, 1.01).unwrap();
        net.complete = false;
        assert!(net.verify(&d, &m).is_err());
    }

    #[test]
    fn packing_examples() {
        let d = line();
        assert_eq!(packing_lower(&d, &cloud(&[0.0, 5.0]), 1.0).unwrap().count(), 2);
        assert_eq!(packing_lower(&d, &cloud(&[4.0]), 1.0).unwrap().count(), 1);
        let m = cloud(&[0.0, 1.0, 2.0, 3.0]);
        let p = packing_lower(&d, &m, 0.4).unwrap();
        assert_eq!(p.count(), 4);
        p.verify(&d, &m).unwrap();
    }

    #[test]
    fn bad_eps_is_rejected() {
        assert!(matches!(greedy_net(&line(), &cloud(&[0.0]), 0.0), Err(MncError::Eps(_))));
        assert!(matches!(packing_lower(&line(), &cloud(&[0.0]), f64::NAN), Err(MncError::Eps(_))));
    }
}
