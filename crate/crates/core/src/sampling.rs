//! Seeded generators for vectors, clouds and lattice sets.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::metric::FNormMetric;
use crate::space::{PointCloud, SpaceModel, Vector};
use crate::tolerances::EXACT;

/// ChaCha8 generator for `seed`; `stream` separates independent consumers.
pub fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// Coordinates uniform in `[-half_width, half_width]`.
pub fn uniform_vector(rng: &mut impl Rng, dim: usize, half_width: f64) -> Vector {
    Vector::from_raw((0..dim).map(|_| rng.gen_range(-half_width..=half_width)).collect())
}

pub fn uniform_cloud(
    rng: &mut impl Rng,
    dim: usize,
    n: usize,
    half_width: f64,
    label: impl Into<String>,
) -> PointCloud {
    let points = (0..n).map(|_| uniform_vector(rng, dim, half_width)).collect();
    PointCloud::from_points_unchecked(points, dim, label.into())
}

/// A random direction rescaled so that `|v| = target` under a homogeneous
/// norm-like functional `size` (for instance `2^-n0 · gauge_U`).
pub fn vector_of_size(
    rng: &mut impl Rng,
    dim: usize,
    target: f64,
    size: impl Fn(&Vector) -> f64,
) -> Vector {
    loop {
        let v = uniform_vector(rng, dim, 1.0);
        let s = size(&v);
        if s > 1e-6 {
            return v.scale(target / s);
        }
    }
}

pub fn pairs(rng: &mut impl Rng, dim: usize, n: usize, half_width: f64) -> Vec<(Vector, Vector)> {
    (0..n)
        .map(|_| (uniform_vector(rng, dim, half_width), uniform_vector(rng, dim, half_width)))
        .collect()
}

pub fn triples(rng: &mut impl Rng, dim: usize, n: usize, half_width: f64) -> Vec<[Vector; 3]> {
    (0..n).map(|_| std::array::from_fn(|_| uniform_vector(rng, dim, half_width))).collect()
}

pub fn quadruples(rng: &mut impl Rng, dim: usize, n: usize, half_width: f64) -> Vec<[Vector; 4]> {
    (0..n).map(|_| std::array::from_fn(|_| uniform_vector(rng, dim, half_width))).collect()
}

/// All lattice points of the box `[lo, hi]` with `per_axis` points per axis,
/// in lexicographic order.
pub fn box_grid(lo: &[f64], hi: &[f64], per_axis: usize, label: impl Into<String>) -> PointCloud {
    assert_eq!(lo.len(), hi.len(), "box corner dimension mismatch");
    assert!(per_axis >= 1);
    let dim = lo.len();
    let axis = |i: usize, k: usize| {
        if per_axis == 1 {
            0.5 * (lo[i] + hi[i])
        } else {
            lo[i] + (hi[i] - lo[i]) * k as f64 / (per_axis - 1) as f64
        }
    };
    let total = per_axis.pow(dim as u32);
    let points = (0..total)
        .map(|mut idx| {
            let mut c = vec![0.0; dim];
            for i in (0..dim).rev() {
                c[i] = axis(i, idx % per_axis);
                idx /= per_axis;
            }
            Vector::from_raw(c)
        })
        .collect();
    PointCloud::from_points_unchecked(points, dim, label.into())
}

/// Largest `|x_i|` over the unit ball `{x : p_k(x) <= c_k}`, per coordinate.
fn unit_ball_extent(space: &SpaceModel, caps: &[f64]) -> Vec<f64> {
    (0..space.dim())
        .map(|i| {
            let e = Vector::basis(space.dim(), i);
            (1..=space.seminorm_count())
                .filter_map(|k| {
                    let p = space.seminorm_unchecked(k, e.coords());
                    (p > 0.0).then(|| caps[k - 1] / p)
                })
                .fold(f64::INFINITY, f64::min)
        })
        .collect()
}

/// Lattice points of the closed ball `B(center, radius)` of a gauge or paper
/// metric, center first.
pub fn ball_grid(metric: &FNormMetric, center: &Vector, radius: f64, per_axis: usize) -> PointCloud {
    let space = metric.space();
    let scale = radius * (metric.n0() as f64).exp2();
    let extent = unit_ball_extent(space, metric.caps());
    let lo: Vec<f64> = center.coords().iter().zip(&extent).map(|(c, e)| c - scale * e).collect();
    let hi: Vec<f64> = center.coords().iter().zip(&extent).map(|(c, e)| c + scale * e).collect();
    let lattice = box_grid(&lo, &hi, per_axis, "lattice");
    let mut points = vec![center.clone()];
    points.extend(
        lattice
            .iter()
            .filter(|p| *p != center && metric.dist(center, p) <= radius + EXACT)
            .cloned(),
    );
    PointCloud::from_points_unchecked(points, space.dim(), format!("ball(r={radius})"))
}

/// `k` points evenly spaced on the segment `[a, b]`, endpoints included.
pub fn segment_grid(a: &Vector, b: &Vector, k: usize, label: impl Into<String>) -> PointCloud {
    assert!(k >= 2);
    let points = (0..k)
        .map(|j| {
            let t = j as f64 / (k - 1) as f64;
            Vector::combination(a.dim(), [(1.0 - t, a), (t, b)])
        })
        .collect();
    PointCloud::from_points_unchecked(points, a.dim(), label.into())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_stream() {
        let a = uniform_vector(&mut rng(7, 1), 5, 1.0);
        let b = uniform_vector(&mut rng(7, 1), 5, 1.0);
        let c = uniform_vector(&mut rng(7, 2), 5, 1.0);
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn box_grid_layout() {
        let g = box_grid(&[0.0, 0.0], &[1.0, 2.0], 3, "box");
        assert_eq!(g.len(), 9);
        assert_eq!(g.get(0).coords(), &[0.0, 0.0]);
        assert_eq!(g.get(5).coords(), &[0.5, 2.0]);
    }

    #[test]
    fn ball_grid_lists_center_first() {
        let s = SpaceModel::c_grid(2, 1, 1.0).unwrap();
        let d = FNormMetric::unit_gauge(&s).unwrap();
        let c = Vector::new(vec![1.0, 1.0]).unwrap();
        let ball = ball_grid(&d, &c, 1.0, 5);
        assert_eq!(ball.get(0), &c);
        assert_eq!(ball.len(), 25);
        assert!(ball.iter().all(|p| d.dist(&c, p) <= 1.0));
    }

    #[test]
    fn ball_grid_on_l1_blocks_is_a_diamond() {
        let s = SpaceModel::seq_product(vec![2]).unwrap();
        let d = FNormMetric::unit_gauge(&s).unwrap();
        let ball = ball_grid(&d, &Vector::zeros(2), 1.0, 3);
        assert_eq!(ball.len(), 5);
    }

    #[test]
    fn sized_vectors() {
        let s = SpaceModel::c_grid(3, 3, 1.0).unwrap();
        let d = FNormMetric::unit_gauge(&s).unwrap();
        let v = vector_of_size(&mut rng(1, 0), 3, 0.7, |x| d.norm(x).unwrap());
        assert!((d.norm(&v).unwrap() - 0.7).abs() < 1e-12);
    }
}
