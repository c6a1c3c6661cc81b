//! Random geometric graph construction on the unit torus.
//!
//! Nodes are connected when their periodic distance is at most `r` (closed
//! ball: ties at exactly `r` are edges). Neighbor search uses a spatial
//! cell list with periodic wrap; when fewer than three cells fit per axis
//! the builder falls back to the brute-force pairwise scan, which is also
//! the oracle the cell list is tested against.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::torus::{sample_uniform, torus_distance_coords, PointCloud};

/// Parameters of an RGG realization.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct RggSpec {
    pub n: usize,
    pub d: usize,
    /// Connectivity radius, in units of the torus side; must stay below the
    /// injectivity radius 1/2 so the ball of radius `r` is a true ball.
    pub r: f64,
    pub seed: u64,
}

impl RggSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n < 1 {
            return Err(Error::InvalidParameter("n must be >= 1".into()));
        }
        if self.d < 1 {
            return Err(Error::InvalidParameter("d must be >= 1".into()));
        }
        if !(self.r > 0.0 && self.r < 0.5) {
            return Err(Error::InvalidParameter(format!(
                "radius r={} must satisfy 0 < r < 0.5 (torus ball limit)",
                self.r
            )));
        }
        Ok(())
    }
}

/// An RGG realization: sorted neighbor lists plus the positions that
/// produced them.
#[derive(Debug, Clone)]
pub struct Graph {
    neighbors: Vec<Vec<u32>>,
    positions: PointCloud,
    spec: RggSpec,
}

impl Graph {
    pub fn n(&self) -> usize {
        self.neighbors.len()
    }

    pub fn spec(&self) -> &RggSpec {
        &self.spec
    }

    pub fn positions(&self) -> &PointCloud {
        &self.positions
    }

    pub fn neighbors(&self, i: usize) -> &[u32] {
        &self.neighbors[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.neighbors[i].len()
    }

    pub fn degree_sequence(&self) -> Vec<usize> {
        self.neighbors.iter().map(Vec::len).collect()
    }

    pub fn num_edges(&self) -> usize {
        self.neighbors.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn mean_degree(&self) -> f64 {
        2.0 * self.num_edges() as f64 / self.n() as f64
    }

    pub fn max_degree(&self) -> usize {
        self.neighbors.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Edges as sorted `(i, j)` pairs with `i < j`.
    pub fn edges(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::with_capacity(self.num_edges());
        for (i, nbrs) in self.neighbors.iter().enumerate() {
            for &j in nbrs {
                if (i as u32) < j {
                    out.push((i as u32, j));
                }
            }
        }
        out
    }

    /// Exact count of unordered vertex triples forming triangles.
    pub fn count_triangles(&self) -> u64 {
        let mut count = 0u64;
        for (i, nbrs) in self.neighbors.iter().enumerate() {
            let i = i as u32;
            for &j in nbrs {
                if j <= i {
                    continue;
                }
                // common neighbors k > j of i and j
                count += sorted_common_above(&self.neighbors[i as usize], &self.neighbors[j as usize], j);
            }
        }
        count
    }

    /// Writes the edge list as text, one `i j` pair per line, `i < j`, sorted.
    pub fn write_edge_list<W: Write>(&self, w: &mut W) -> Result<()> {
        for (i, j) in self.edges() {
            writeln!(w, "{i} {j}")?;
        }
        Ok(())
    }
}

fn sorted_common_above(a: &[u32], b: &[u32], above: u32) -> u64 {
    let mut ai = a.partition_point(|&x| x <= above);
    let mut bi = b.partition_point(|&x| x <= above);
    let mut count = 0;
    while ai < a.len() && bi < b.len() {
        match a[ai].cmp(&b[bi]) {
            std::cmp::Ordering::Less => ai += 1,
            std::cmp::Ordering::Greater => bi += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                ai += 1;
                bi += 1;
            }
        }
    }
    count
}

/// Reads an edge list in the `write_edge_list` format.
pub fn read_edge_list<R: BufRead>(r: R) -> Result<Vec<(u32, u32)>> {
    let mut edges = Vec::new();
    for line in r.lines() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut it = line.split_whitespace();
        let (a, b) = match (it.next(), it.next()) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(Error::Parse(format!("bad edge line: {line:?}"))),
        };
        let i: u32 = a.parse().map_err(|_| Error::Parse(format!("bad index {a:?}")))?;
        let j: u32 = b.parse().map_err(|_| Error::Parse(format!("bad index {b:?}")))?;
        edges.push((i, j));
    }
    Ok(edges)
}

/// Samples positions for `spec` and connects pairs at torus distance <= r.
pub fn build(spec: &RggSpec) -> Result<Graph> {
    spec.validate()?;
    let cloud = sample_uniform(spec.n, spec.d, spec.seed)?;
    build_with_positions(cloud, spec.r)
}

/// Builds the graph over an explicit point cloud (used for replay and tests).
pub fn build_with_positions(positions: PointCloud, r: f64) -> Result<Graph> {
    if !(r > 0.0 && r < 0.5) {
        return Err(Error::InvalidParameter(format!(
            "radius r={r} must satisfy 0 < r < 0.5 (torus ball limit)"
        )));
    }
    let cells_per_axis = (1.0 / r).floor() as usize;
    let neighbors = if cells_per_axis < 3 {
        brute_force_neighbors(&positions, r)
    } else {
        cell_list_neighbors(&positions, r, cells_per_axis)
    };
    let spec = RggSpec {
        n: positions.len(),
        d: positions.dim(),
        r,
        seed: positions.seed(),
    };
    Ok(Graph { neighbors, positions, spec })
}

/// O(n^2) pairwise construction; the oracle for the cell list.
pub fn brute_force_neighbors(positions: &PointCloud, r: f64) -> Vec<Vec<u32>> {
    let n = positions.len();
    let mut neighbors = vec![Vec::new(); n];
    for i in 0..n {
        for j in (i + 1)..n {
            let dist = torus_distance_coords(
                positions.point(i).coords(),
                positions.point(j).coords(),
            );
            if dist <= r {
                neighbors[i].push(j as u32);
                neighbors[j].push(i as u32);
            }
        }
    }
    neighbors
}

fn cell_list_neighbors(positions: &PointCloud, r: f64, m: usize) -> Vec<Vec<u32>> {
    let n = positions.len();
    let d = positions.dim();
    let num_cells = m.pow(d as u32);

    let cell_of = |coords: &[f64]| -> usize {
        let mut idx = 0;
        for &c in coords {
            let axis = ((c * m as f64) as usize).min(m - 1);
            idx = idx * m + axis;
        }
        idx
    };

    let mut cells: Vec<Vec<u32>> = vec![Vec::new(); num_cells];
    for i in 0..n {
        cells[cell_of(positions.point(i).coords())].push(i as u32);
    }

    // offsets over {-1,0,1}^d with periodic wrap
    let mut offsets: Vec<Vec<isize>> = vec![vec![]];
    for _ in 0..d {
        offsets = offsets
            .iter()
            .flat_map(|o| {
                [-1isize, 0, 1].iter().map(move |&s| {
                    let mut v = o.clone();
                    v.push(s);
                    v
                })
            })
            .collect();
    }

    let mut neighbors = vec![Vec::new(); n];
    let mut cell_coords = vec![0usize; d];
    for cell in 0..num_cells {
        // decode mixed-radix cell index
        let mut rem = cell;
        for axis in (0..d).rev() {
            cell_coords[axis] = rem % m;
            rem /= m;
        }
        for off in &offsets {
            let mut other = 0usize;
            for axis in 0..d {
                let shifted =
                    (cell_coords[axis] as isize + off[axis]).rem_euclid(m as isize) as usize;
                other = other * m + shifted;
            }
            // visit each unordered cell pair once; within a cell, pair i<j
            if other < cell {
                continue;
            }
            for (a_idx, &i) in cells[cell].iter().enumerate() {
                let start = if other == cell { a_idx + 1 } else { 0 };
                for &j in &cells[other][start..] {
                    if other == cell && j <= i {
                        continue;
                    }
                    let dist = torus_distance_coords(
                        positions.point(i as usize).coords(),
                        positions.point(j as usize).coords(),
                    );
                    if dist <= r {
                        neighbors[i as usize].push(j);
                        neighbors[j as usize].push(i);
                    }
                }
            }
        }
    }
    for list in &mut neighbors {
        list.sort_unstable();
        list.dedup();
    }
    neighbors
}

/// Volume of the d-dimensional unit ball, via the half-integer recurrence.
pub fn unit_ball_volume(d: usize) -> f64 {
    match d {
        0 => 1.0,
        1 => 2.0,
        _ => unit_ball_volume(d - 2) * 2.0 * std::f64::consts::PI / d as f64,
    }
}

/// Expected degree `n * V^(d) * r^d` of a node in an RGG.
pub fn expected_degree(n: usize, d: usize, r: f64) -> f64 {
    n as f64 * unit_ball_volume(d) * r.powi(d as i32)
}
