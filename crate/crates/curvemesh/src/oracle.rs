//! Independent sampling references used by the test suite.
//!
//! Nothing here is certified and nothing here is called by the meshing
//! pipeline. These functions answer the same questions as the pipeline
//! (where is the curve, how many branches meet a point, how small can a
//! positive critical value be) by brute-force exact sampling, so the test
//! suite can cross-check pipeline output against an implementation that
//! shares no code with it beyond polynomial evaluation.
//!
//! All sampling grids are dyadic (power-of-two subdivisions), so every
//! evaluation is exact; "not certified" refers to resolution, not rounding:
//! a feature smaller than the grid is invisible here.

use crate::numeric::{Dyadic, Rect, Sign};
use crate::poly::BiPoly;
use crate::{Error, Result};
use std::collections::HashMap;

/// Straight-line graph produced by [`marching_reference`].
#[derive(Clone, Debug)]
pub struct RefMesh {
    pub vertices: Vec<(Dyadic, Dyadic)>,
    pub edges: Vec<(usize, usize)>,
}

impl RefMesh {
    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adjacency().iter().map(|n| n.len()).collect()
    }

    pub fn component_count(&self) -> usize {
        let adj = self.adjacency();
        let mut seen = vec![false; self.vertices.len()];
        let mut count = 0;
        for start in 0..self.vertices.len() {
            if seen[start] {
                continue;
            }
            count += 1;
            let mut stack = vec![start];
            seen[start] = true;
            while let Some(v) = stack.pop() {
                for &w in &adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
        }
        count
    }

    /// Independent cycles: E - V + C.
    pub fn cycle_rank(&self) -> usize {
        self.edges.len() + self.component_count() - self.vertices.len()
    }
}

/// Marching-squares reference on a 2^grid_pow x 2^grid_pow cell grid.
///
/// Corner signs are perturbed (exact zero counts as positive), matching the
/// pipeline's convention, so the output is always a disjoint union of paths
/// and loops unless a cell has all four corner signs alternating; that cell
/// is reported as [`Error::AmbiguousCell`] instead of being resolved by a
/// heuristic.
pub fn marching_reference(f: &BiPoly, region: &Rect, grid_pow: u32) -> Result<RefMesh> {
    if grid_pow == 0 || grid_pow > 12 {
        return Err(Error::Invalid("marching grid exponent must be in 1..=12".into()));
    }
    let n = 1usize << grid_pow;
    let sx = region.x.width().mul_pow2(-(grid_pow as i64));
    let sy = region.y.width().mul_pow2(-(grid_pow as i64));
    let gx: Vec<Dyadic> = (0..=n)
        .map(|i| region.x.lo().add(&sx.mul(&Dyadic::from_int(i as i64))))
        .collect();
    let gy: Vec<Dyadic> = (0..=n)
        .map(|j| region.y.lo().add(&sy.mul(&Dyadic::from_int(j as i64))))
        .collect();
    let mut signs = vec![vec![Sign::Pos; n + 1]; n + 1];
    for (i, x) in gx.iter().enumerate() {
        for (j, y) in gy.iter().enumerate() {
            signs[i][j] = f.sign_at(x, y);
        }
    }

    let mut vertices: Vec<(Dyadic, Dyadic)> = Vec::new();
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut index: HashMap<(Dyadic, Dyadic), usize> = HashMap::new();
    let mut vertex_at = |vertices: &mut Vec<(Dyadic, Dyadic)>, p: (Dyadic, Dyadic)| -> usize {
        if let Some(&k) = index.get(&p) {
            return k;
        }
        let k = vertices.len();
        vertices.push(p.clone());
        index.insert(p, k);
        k
    };

    for j in 0..n {
        for i in 0..n {
            // Cell edges in order south, east, north, west.
            let cell_edges = [
                ((i, j), (i + 1, j)),
                ((i + 1, j), (i + 1, j + 1)),
                ((i + 1, j + 1), (i, j + 1)),
                ((i, j + 1), (i, j)),
            ];
            let mut crossings: Vec<(Dyadic, Dyadic)> = Vec::new();
            for ((ia, ja), (ib, jb)) in cell_edges {
                if signs[ia][ja] != signs[ib][jb] {
                    crossings.push((
                        Dyadic::midpoint(&gx[ia], &gx[ib]),
                        Dyadic::midpoint(&gy[ja], &gy[jb]),
                    ));
                }
            }
            match crossings.len() {
                0 => {}
                2 => {
                    let a = vertex_at(&mut vertices, crossings[0].clone());
                    let b = vertex_at(&mut vertices, crossings[1].clone());
                    edges.push((a.min(b), a.max(b)));
                }
                4 => return Err(Error::AmbiguousCell { i: i as u32, j: j as u32 }),
                _ => unreachable!("sign changes around a 4-cycle are even"),
            }
        }
    }
    Ok(RefMesh { vertices, edges })
}

/// Number of curve branches crossing a small square loop around a point.
///
/// Walks the axis-aligned square of the given half-width and counts sign
/// alternations of f along it, doubling the sampling rate until two rounds
/// in a row agree. The count is necessarily even; for a small enough loop it
/// is the local branching degree of the curve at the center.
pub fn loop_branch_count(
    f: &BiPoly,
    cx: &Dyadic,
    cy: &Dyadic,
    half_width: &Dyadic,
) -> Result<u32> {
    if !half_width.is_positive() {
        return Err(Error::Invalid("loop half-width must be positive".into()));
    }
    let mut prev: Option<u32> = None;
    for pow in 3..=11u32 {
        let count = loop_transitions(f, cx, cy, half_width, pow);
        if prev == Some(count) {
            return Ok(count);
        }
        prev = Some(count);
    }
    Err(Error::Invalid(
        "branch count along the loop did not stabilize; shrink the loop".into(),
    ))
}

fn loop_transitions(f: &BiPoly, cx: &Dyadic, cy: &Dyadic, r: &Dyadic, pow: u32) -> u32 {
    let m = 1i64 << pow;
    let xw = cx.sub(r);
    let xe = cx.add(r);
    let ys = cy.sub(r);
    let yn = cy.add(r);
    let mut signs = Vec::with_capacity(4 * m as usize);
    for k in 0..m {
        // t = 2r * k/m, exact because m is a power of two.
        let t = r.mul(&Dyadic::new(k.into(), 1 - pow as i64));
        signs.push(f.sign_at(&xw.add(&t), &ys));
        signs.push(f.sign_at(&xe, &ys.add(&t)));
        signs.push(f.sign_at(&xe.sub(&t), &yn));
        signs.push(f.sign_at(&xw, &yn.sub(&t)));
    }
    // The four sides were interleaved above; re-walk in cyclic order.
    let ordered: Vec<Sign> = (0..4)
        .flat_map(|side| signs.iter().skip(side).step_by(4).copied().collect::<Vec<_>>())
        .collect();
    let mut transitions = 0;
    for k in 0..ordered.len() {
        if ordered[k] != ordered[(k + 1) % ordered.len()] {
            transitions += 1;
        }
    }
    transitions
}

/// Rough estimate (from below) of the smallest strictly positive critical
/// value of a nonnegative polynomial over a region.
///
/// Samples on a power-of-two grid, keeps interior strict-grid local minima
/// whose value exceeds h^2 (smaller values are assumed to belong to a basin
/// where the polynomial actually reaches zero), and returns half the
/// smallest survivor. `None` when no local minimum clears the threshold.
pub fn min_positive_critical_estimate(
    f: &BiPoly,
    region: &Rect,
    grid_pow: u32,
) -> Option<Dyadic> {
    let n = 1usize << grid_pow;
    let sx = region.x.width().mul_pow2(-(grid_pow as i64));
    let sy = region.y.width().mul_pow2(-(grid_pow as i64));
    let step = if sx >= sy { sx.clone() } else { sy.clone() };
    let threshold = step.square();
    let mut values = vec![vec![Dyadic::zero(); n + 1]; n + 1];
    for (i, row) in values.iter_mut().enumerate() {
        let x = region.x.lo().add(&sx.mul(&Dyadic::from_int(i as i64)));
        for (j, cell) in row.iter_mut().enumerate() {
            let y = region.y.lo().add(&sy.mul(&Dyadic::from_int(j as i64)));
            *cell = f.eval(&x, &y);
        }
    }
    let mut best: Option<Dyadic> = None;
    for i in 1..n {
        for j in 1..n {
            let v = &values[i][j];
            if *v <= threshold {
                continue;
            }
            let mut is_min = true;
            'nbr: for di in -1i64..=1 {
                for dj in -1i64..=1 {
                    if di == 0 && dj == 0 {
                        continue;
                    }
                    let ni = (i as i64 + di) as usize;
                    let nj = (j as i64 + dj) as usize;
                    if values[ni][nj] < *v {
                        is_min = false;
                        break 'nbr;
                    }
                }
            }
            if is_min && best.as_ref().is_none_or(|b| v < b) {
                best = Some(v.clone());
            }
        }
    }
    best.map(|b| b.mul_pow2(-1))
}
