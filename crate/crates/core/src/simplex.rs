//! Nelder–Mead downhill simplex minimizer.

/// Settings for [`NelderMead::minimize`].
#[derive(Clone, Debug, PartialEq)]
pub struct NelderMead {
    /// Iteration budget, shared across restarts.
    pub max_iterations: usize,
    /// Stop once `f(worst) - f(best)` drops below this.
    pub spread_tolerance: f64,
    /// Edge offset used to build the starting simplex around a point.
    pub initial_step: f64,
    /// How many times to rebuild the simplex around a converged point.
    pub max_restarts: usize,
}

impl Default for NelderMead {
    fn default() -> Self {
        NelderMead {
            max_iterations: 500,
            spread_tolerance: 1e-9,
            initial_step: 1.0,
            max_restarts: 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    /// Whether the spread criterion was met (as opposed to running out of
    /// iterations).
    pub converged: bool,
}

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

#[derive(Clone)]
struct Vertex {
    x: Vec<f64>,
    f: f64,
}

impl NelderMead {
    /// Minimizes `f` from `x0`. Non-finite values (including NaN) are
    /// treated as `+inf`, so infeasible regions can be signalled that way.
    pub fn minimize(&self, mut f: impl FnMut(&[f64]) -> f64, x0: &[f64]) -> Minimum {
        assert!(!x0.is_empty(), "cannot minimize over zero dimensions");
        let mut eval = |x: &[f64]| {
            let v = f(x);
            if v.is_nan() {
                f64::INFINITY
            } else {
                v
            }
        };
        let mut best = Vertex {
            x: x0.to_vec(),
            f: eval(x0),
        };
        let mut iterations = 0;
        let mut converged = false;
        for round in 0..=self.max_restarts {
            let (vertex, iters, done) = self.run(&mut eval, &best, self.max_iterations - iterations);
            iterations += iters;
            converged = done;
            // The start point is a vertex of the simplex, so this never worsens.
            let gain = best.f - vertex.f;
            best = vertex;
            if !done || iterations >= self.max_iterations {
                break;
            }
            if round > 0 && (gain.is_nan() || gain < self.spread_tolerance) {
                break;
            }
        }
        Minimum {
            x: best.x,
            value: best.f,
            iterations,
            converged,
        }
    }

    fn run(
        &self,
        eval: &mut impl FnMut(&[f64]) -> f64,
        start: &Vertex,
        budget: usize,
    ) -> (Vertex, usize, bool) {
        let dim = start.x.len();
        let mut simplex = Vec::with_capacity(dim + 1);
        simplex.push(start.clone());
        for i in 0..dim {
            let mut x = start.x.clone();
            x[i] += self.initial_step;
            let f = eval(&x);
            simplex.push(Vertex { x, f });
        }

        let mut iterations = 0;
        loop {
            simplex.sort_by(|a, b| a.f.total_cmp(&b.f));
            let spread = simplex[dim].f - simplex[0].f;
            if simplex[0].f.is_finite() && spread.is_finite() && spread < self.spread_tolerance {
                return (simplex.swap_remove(0), iterations, true);
            }
            if iterations >= budget {
                return (simplex.swap_remove(0), iterations, false);
            }
            iterations += 1;

            let mut centroid = vec![0.0; dim];
            for v in &simplex[..dim] {
                for (c, x) in centroid.iter_mut().zip(&v.x) {
                    *c += x / dim as f64;
                }
            }
            let toward = |coef: f64, from: &[f64]| -> Vec<f64> {
                centroid
                    .iter()
                    .zip(from)
                    .map(|(c, x)| c + coef * (x - c))
                    .collect()
            };

            let worst = simplex[dim].clone();
            let xr = toward(-REFLECT, &worst.x);
            let fr = eval(&xr);
            if fr < simplex[0].f {
                let xe = toward(-REFLECT * EXPAND, &worst.x);
                let fe = eval(&xe);
                simplex[dim] = if fe < fr {
                    Vertex { x: xe, f: fe }
                } else {
                    Vertex { x: xr, f: fr }
                };
                continue;
            }
            if fr < simplex[dim - 1].f {
                simplex[dim] = Vertex { x: xr, f: fr };
                continue;
            }
            let (xc, fc, accept) = if fr < worst.f {
                let xc = toward(-REFLECT * CONTRACT, &worst.x);
                let fc = eval(&xc);
                (xc, fc, fc <= fr)
            } else {
                let xc = toward(CONTRACT, &worst.x);
                let fc = eval(&xc);
                (xc, fc, fc < worst.f)
            };
            if accept {
                simplex[dim] = Vertex { x: xc, f: fc };
                continue;
            }
            let anchor = simplex[0].x.clone();
            for v in simplex.iter_mut().skip(1) {
                for (x, a) in v.x.iter_mut().zip(&anchor) {
                    *x = a + SHRINK * (*x - a);
                }
                v.f = eval(&v.x);
            }
        }
    }
}
