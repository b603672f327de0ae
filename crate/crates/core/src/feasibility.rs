//! Linear programs over caps-box gauges, solved with `microlp`.
//!
//! `U = {x : p_k(x) <= c_k for all k}` is a polytope for every locally convex
//! space model, so `gauge_U(expr) <= s` is a set of linear constraints once the
//! sum-type seminorms get one absolute-value slack per coordinate.

use microlp::{ComparisonOp, OptimizationDirection, Problem, Variable};

use crate::space::{SeminormShape, SpaceModel};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LpError {
    #[error("space is not locally convex; its unit ball is not a polytope")]
    NotConvex,
    #[error("linear program failed: {0}")]
    Solver(String),
}

/// One coordinate of an affine expression `constant + Σ coef · var`.
#[derive(Debug, Clone, Default)]
struct Row {
    terms: Vec<(Variable, f64)>,
    constant: f64,
}

/// The polytope `U` in LP form.
#[derive(Debug, Clone)]
pub(crate) struct CapsBox {
    shapes: Vec<SeminormShape>,
    caps: Vec<f64>,
    dim: usize,
}

impl CapsBox {
    pub(crate) fn new(space: &SpaceModel, caps: &[f64]) -> Result<Self, LpError> {
        let shapes = space.convex_shapes().ok_or(LpError::NotConvex)?;
        Ok(CapsBox { shapes, caps: caps.to_vec(), dim: space.dim() })
    }

    /// Adds `gauge_U(rows) <= scale · s`.
    fn constrain(&self, problem: &mut Problem, rows: &[Row], s: Variable, scale: f64) {
        let mut slack: Vec<Option<Variable>> = vec![None; self.dim];
        for (shape, &cap) in self.shapes.iter().zip(&self.caps) {
            let bound = scale * cap;
            match shape {
                SeminormShape::Sup { indices } => {
                    for i in indices.clone() {
                        for sign in [1.0, -1.0] {
                            let mut expr: Vec<(Variable, f64)> =
                                rows[i].terms.iter().map(|&(v, c)| (v, sign * c)).collect();
                            expr.push((s, -bound));
                            problem.add_constraint(expr, ComparisonOp::Le, -sign * rows[i].constant);
                        }
                    }
                }
                SeminormShape::Sum { indices, weight } => {
                    let mut total = Vec::with_capacity(indices.len() + 1);
                    for i in indices.clone() {
                        let t = *slack[i].get_or_insert_with(|| {
                            let t = problem.add_var(0.0, (0.0, f64::INFINITY));
                            for sign in [1.0, -1.0] {
                                let mut expr: Vec<(Variable, f64)> =
                                    rows[i].terms.iter().map(|&(v, c)| (v, sign * c)).collect();
                                expr.push((t, -1.0));
                                problem.add_constraint(
                                    expr,
                                    ComparisonOp::Le,
                                    -sign * rows[i].constant,
                                );
                            }
                            t
                        });
                        total.push((t, *weight));
                    }
                    total.push((s, -bound));
                    problem.add_constraint(total, ComparisonOp::Le, 0.0);
                }
            }
        }
    }
}

fn solve(problem: &Problem) -> Result<microlp::Solution, LpError> {
    problem
        .solve()
        .map_err(|e| LpError::Solver(e.to_string()))?
        .into_solution()
        .map_err(|e| LpError::Solver(format!("{e:?}")))
}

/// Least `σ` such that `x = Σ_j x_j` with `gauge_U(x_j) <= σ · scales[j]`.
///
/// With `scales[j] = 2^{n0-n_j}` this is the decomposition of `x` over the
/// sets `V_n`, so `x ∈ Σ_j V_{n_j}` iff the result is at most 1.
pub(crate) fn decomposition_scale(
    cbox: &CapsBox,
    scales: &[f64],
    x: &[f64],
) -> Result<f64, LpError> {
    let mut problem = Problem::new(OptimizationDirection::Minimize);
    let sigma = problem.add_var(1.0, (0.0, f64::INFINITY));
    let parts: Vec<Vec<Variable>> = scales
        .iter()
        .map(|_| (0..cbox.dim).map(|_| problem.add_var(0.0, (f64::NEG_INFINITY, f64::INFINITY))).collect())
        .collect();
    for (i, &xi) in x.iter().enumerate() {
        let expr: Vec<(Variable, f64)> = parts.iter().map(|p| (p[i], 1.0)).collect();
        problem.add_constraint(expr, ComparisonOp::Eq, xi);
    }
    for (part, &scale) in parts.iter().zip(scales) {
        let rows: Vec<Row> = part
            .iter()
            .map(|&v| Row { terms: vec![(v, 1.0)], constant: 0.0 })
            .collect();
        cbox.constrain(&mut problem, &rows, sigma, scale);
    }
    Ok(solve(&problem)?.objective())
}

/// `min_{w ∈ simplex} gauge_U(x − Σ w_j g_j)` and the minimising weights.
///
/// The program is posed relative to the first generator and rescaled to unit
/// spread, so tiny hulls stay well conditioned.
pub(crate) fn gauge_distance_to_hull(
    cbox: &CapsBox,
    generators: &[&[f64]],
    x: &[f64],
) -> Result<(f64, Vec<f64>), LpError> {
    let Some(origin) = generators.first() else {
        return Err(LpError::Solver("empty generator set".into()));
    };
    let spread = generators
        .iter()
        .flat_map(|g| g.iter().zip(origin.iter()).map(|(a, b)| (a - b).abs()))
        .chain(x.iter().zip(origin.iter()).map(|(a, b)| (a - b).abs()))
        .fold(0.0, f64::max);
    if spread == 0.0 {
        let mut w = vec![0.0; generators.len()];
        w[0] = 1.0;
        return Ok((0.0, w));
    }
    let shift = |v: &[f64]| -> Vec<f64> { v.iter().zip(origin.iter()).map(|(a, b)| (a - b) / spread).collect() };
    let gens: Vec<Vec<f64>> = generators.iter().map(|g| shift(g)).collect();
    let refs: Vec<&[f64]> = gens.iter().map(Vec::as_slice).collect();
    let (d, w) = hull_program(cbox, &refs, &shift(x))?;
    Ok((d * spread, w))
}

fn hull_program(cbox: &CapsBox, generators: &[&[f64]], x: &[f64]) -> Result<(f64, Vec<f64>), LpError> {
    let mut problem = Problem::new(OptimizationDirection::Minimize);
    let s = problem.add_var(1.0, (0.0, f64::INFINITY));
    let weights: Vec<Variable> =
        generators.iter().map(|_| problem.add_var(0.0, (0.0, 1.0))).collect();
    problem.add_constraint(
        weights.iter().map(|&w| (w, 1.0)).collect::<Vec<_>>(),
        ComparisonOp::Eq,
        1.0,
    );
    let rows: Vec<Row> = (0..cbox.dim)
        .map(|i| Row {
            terms: weights.iter().zip(generators).map(|(&w, g)| (w, -g[i])).collect(),
            constant: x[i],
        })
        .collect();
    cbox.constrain(&mut problem, &rows, s, 1.0);
    let solution = solve(&problem)?;
    let w = weights.iter().map(|&v| solution.var_value(v)).collect();
    Ok((solution.objective().max(0.0), w))
}
