//! Plane drawings with one infinite region, stored as rotation systems.
//!
//! Every vertex keeps its neighbours in clockwise order. A corner between two
//! clockwise-consecutive neighbours is either a finite triangle or a gap (a
//! visit of the infinite region). `(u, v, w)` is a clockwise face exactly when
//! `w` follows `v` around `u` across a finite corner.

use std::collections::{HashMap, VecDeque};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DrawingError {
    #[error("vertex id {0} appears twice")]
    DuplicateId(u32),
    #[error("vertex {0} is adjacent to itself")]
    SelfLoop(u32),
    #[error("vertex {0} lists neighbour {1} twice")]
    DuplicateNeighbour(u32, u32),
    #[error("edge {0}-{1} is listed on one side only")]
    Asymmetric(u32, u32),
    #[error("corners around {0} disagree about a triangle")]
    NotTriangle(u32),
    #[error("faces around {0} do not form one fan")]
    AmbiguousRotation(u32),
    #[error("drawing is disconnected")]
    Disconnected,
    #[error("infinite region appears as {0} separate regions")]
    Boundary(usize),
    #[error("rotation system is not planar")]
    NotPlanar,
    #[error("vertex {0} has gamma {1} below its degree {2}")]
    GammaBelowDegree(u32, u8, usize),
    #[error("vertex {0} has gamma {1} equal to its degree but touches the infinite region")]
    GammaOnBoundary(u32, u8),
    #[error("interior vertex {0} has gamma {1} but degree {2}")]
    GammaInterior(u32, u8, usize),
}

/// A connected plane drawing in which every finite region is a triangle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Drawing {
    ids: Vec<u32>,
    gamma: Vec<u8>,
    rot: Vec<Vec<usize>>,
    gap: Vec<Vec<bool>>,
    adj: Vec<bool>,
}

impl Drawing {
    /// Builds and validates a drawing from explicit rotations.
    ///
    /// `gap[v][j]` marks the corner between `rot[v][j]` and `rot[v][j + 1]`
    /// (cyclically) as infinite.
    pub fn from_rotations(
        ids: Vec<u32>,
        gamma: Vec<u8>,
        rot: Vec<Vec<usize>>,
        gap: Vec<Vec<bool>>,
    ) -> Result<Drawing, DrawingError> {
        let d = Drawing::raw(ids, gamma, rot, gap)?;
        d.validate()?;
        Ok(d)
    }

    /// Builds a drawing from its clockwise finite faces.
    ///
    /// Each vertex's incident faces must chain into a single fan, so the
    /// drawing can be recovered unambiguously.
    pub fn from_faces(
        ids: Vec<u32>,
        gamma: Vec<u8>,
        faces: &[[usize; 3]],
    ) -> Result<Drawing, DrawingError> {
        let n = ids.len();
        let mut next: Vec<HashMap<usize, usize>> = vec![HashMap::new(); n];
        for &[a, b, c] in faces {
            for (v, x, y) in [(a, b, c), (b, c, a), (c, a, b)] {
                if next[v].insert(x, y).is_some() {
                    return Err(DrawingError::AmbiguousRotation(ids[v]));
                }
            }
        }
        let mut rot = Vec::with_capacity(n);
        let mut gap = Vec::with_capacity(n);
        for v in 0..n {
            let succ = &next[v];
            if succ.is_empty() {
                rot.push(Vec::new());
                gap.push(Vec::new());
                continue;
            }
            let mut starts: Vec<usize> =
                succ.keys().copied().filter(|k| !succ.values().any(|x| x == k)).collect();
            starts.sort_unstable();
            let (first, closed) = match starts.as_slice() {
                [] => (*succ.keys().min().unwrap(), true),
                [s] => (*s, false),
                _ => return Err(DrawingError::AmbiguousRotation(ids[v])),
            };
            let mut order = vec![first];
            let mut cur = first;
            while let Some(&nx) = succ.get(&cur) {
                if nx == first {
                    break;
                }
                if order.len() > succ.len() {
                    return Err(DrawingError::AmbiguousRotation(ids[v]));
                }
                order.push(nx);
                cur = nx;
            }
            let expected = if closed { succ.len() } else { succ.len() + 1 };
            if order.len() != expected {
                return Err(DrawingError::AmbiguousRotation(ids[v]));
            }
            let mut g = vec![false; order.len()];
            if !closed {
                *g.last_mut().unwrap() = true;
            }
            rot.push(order);
            gap.push(g);
        }
        Drawing::from_rotations(ids, gamma, rot, gap)
    }

    fn raw(
        ids: Vec<u32>,
        gamma: Vec<u8>,
        rot: Vec<Vec<usize>>,
        gap: Vec<Vec<bool>>,
    ) -> Result<Drawing, DrawingError> {
        let n = ids.len();
        assert_eq!(gamma.len(), n);
        assert_eq!(rot.len(), n);
        assert_eq!(gap.len(), n);
        let mut seen = HashMap::new();
        for &id in &ids {
            if seen.insert(id, ()).is_some() {
                return Err(DrawingError::DuplicateId(id));
            }
        }
        let mut adj = vec![false; n * n];
        for v in 0..n {
            assert_eq!(rot[v].len(), gap[v].len());
            for &u in &rot[v] {
                if u == v {
                    return Err(DrawingError::SelfLoop(ids[v]));
                }
                if adj[v * n + u] {
                    return Err(DrawingError::DuplicateNeighbour(ids[v], ids[u]));
                }
                adj[v * n + u] = true;
            }
        }
        for v in 0..n {
            for u in 0..n {
                if adj[v * n + u] != adj[u * n + v] {
                    return Err(DrawingError::Asymmetric(ids[v], ids[u]));
                }
            }
        }
        Ok(Drawing { ids, gamma, rot, gap, adj })
    }

    /// Structural check: finite corners form triangles, exactly one infinite
    /// region, connected, and Euler's formula for the sphere.
    pub fn validate(&self) -> Result<(), DrawingError> {
        let n = self.len();
        if n == 0 {
            return Err(DrawingError::Disconnected);
        }
        if !self.is_connected() {
            return Err(DrawingError::Disconnected);
        }
        if n == 1 {
            return Ok(());
        }
        let mut finite = 0usize;
        let mut gaps = 0usize;
        for v in 0..n {
            let k = self.rot[v].len();
            for j in 0..k {
                let a = self.rot[v][j];
                let b = self.rot[v][(j + 1) % k];
                if self.gap[v][j] {
                    gaps += 1;
                    continue;
                }
                finite += 1;
                if a == b || self.third(a, b) != Some(v) || self.third(b, v) != Some(a) {
                    return Err(DrawingError::NotTriangle(self.ids[v]));
                }
            }
        }
        if gaps == 0 {
            return Err(DrawingError::Boundary(0));
        }
        // Trace the infinite region: leaving a gap corner at v towards a, the
        // walk continues at the corner of a just before v.
        let mut visited: Vec<Vec<bool>> = self.gap.iter().map(|g| vec![false; g.len()]).collect();
        let mut regions = 0;
        for v in 0..n {
            for j in 0..self.rot[v].len() {
                if !self.gap[v][j] || visited[v][j] {
                    continue;
                }
                regions += 1;
                let (mut cv, mut cj) = (v, j);
                while !visited[cv][cj] {
                    visited[cv][cj] = true;
                    let a = self.rot[cv][cj];
                    let k = self.rot[a].len();
                    let i = self.index_of_neighbour(a, cv).unwrap();
                    let pj = (i + k - 1) % k;
                    if !self.gap[a][pj] {
                        return Err(DrawingError::NotTriangle(self.ids[a]));
                    }
                    cv = a;
                    cj = pj;
                }
            }
        }
        if regions != 1 {
            return Err(DrawingError::Boundary(regions));
        }
        let edges = self.rot.iter().map(Vec::len).sum::<usize>() / 2;
        let faces = finite / 3 + 1;
        if finite % 3 != 0 || n + faces != edges + 2 {
            return Err(DrawingError::NotPlanar);
        }
        Ok(())
    }

    /// Checks `γ ≥ degree`, with equality exactly at interior vertices.
    /// Vertices with `γ = 0` are unconstrained.
    pub fn check_gamma(&self) -> Result<(), DrawingError> {
        for v in 0..self.len() {
            let g = self.gamma[v];
            if g == 0 {
                continue;
            }
            let deg = self.degree(v);
            if (g as usize) < deg {
                return Err(DrawingError::GammaBelowDegree(self.ids[v], g, deg));
            }
            let interior = self.is_interior(v);
            if interior && g as usize != deg {
                return Err(DrawingError::GammaInterior(self.ids[v], g, deg));
            }
            if !interior && g as usize == deg {
                return Err(DrawingError::GammaOnBoundary(self.ids[v], g));
            }
        }
        Ok(())
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.ids.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    #[inline]
    pub fn id(&self, v: usize) -> u32 {
        self.ids[v]
    }

    pub fn ids(&self) -> &[u32] {
        &self.ids
    }

    pub fn index(&self, id: u32) -> Option<usize> {
        self.ids.iter().position(|&x| x == id)
    }

    #[inline]
    pub fn gamma(&self, v: usize) -> u8 {
        self.gamma[v]
    }

    pub fn gammas(&self) -> &[u8] {
        &self.gamma
    }

    /// Clockwise neighbours of `v`.
    #[inline]
    pub fn neighbours(&self, v: usize) -> &[usize] {
        &self.rot[v]
    }

    /// Gap flags parallel to [`Drawing::neighbours`].
    #[inline]
    pub fn gaps(&self, v: usize) -> &[bool] {
        &self.gap[v]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.rot[v].len()
    }

    #[inline]
    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.adj[u * self.len() + v]
    }

    /// True when `v` does not touch the infinite region.
    pub fn is_interior(&self, v: usize) -> bool {
        !self.rot[v].is_empty() && !self.gap[v].iter().any(|&g| g)
    }

    pub fn edge_count(&self) -> usize {
        self.rot.iter().map(Vec::len).sum::<usize>() / 2
    }

    fn index_of_neighbour(&self, u: usize, v: usize) -> Option<usize> {
        self.rot[u].iter().position(|&x| x == v)
    }

    /// The `w` with `(u, v, w)` a clockwise finite face, if any.
    #[inline]
    pub fn third(&self, u: usize, v: usize) -> Option<usize> {
        let j = self.index_of_neighbour(u, v)?;
        if self.gap[u][j] {
            return None;
        }
        Some(self.rot[u][(j + 1) % self.rot[u].len()])
    }

    pub fn is_face(&self, u: usize, v: usize, w: usize) -> bool {
        self.third(u, v) == Some(w)
    }

    /// All finite faces, each once, starting at its smallest vertex.
    pub fn faces(&self) -> Vec<[usize; 3]> {
        let mut out = Vec::new();
        for v in 0..self.len() {
            let k = self.rot[v].len();
            for j in 0..k {
                let a = self.rot[v][j];
                let b = self.rot[v][(j + 1) % k];
                if !self.gap[v][j] && v < a && v < b {
                    out.push([v, a, b]);
                }
            }
        }
        out
    }

    pub fn distances(&self, src: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.len()];
        dist[src] = Some(0);
        let mut queue = VecDeque::from([src]);
        while let Some(v) = queue.pop_front() {
            let dv = dist[v].unwrap();
            for &u in &self.rot[v] {
                if dist[u].is_none() {
                    dist[u] = Some(dv + 1);
                    queue.push_back(u);
                }
            }
        }
        dist
    }

    /// The first vertex within distance two of every vertex.
    pub fn center_within_two(&self) -> Option<usize> {
        (0..self.len()).find(|&v| self.distances(v).iter().all(|d| matches!(d, Some(x) if *x <= 2)))
    }

    pub fn is_connected(&self) -> bool {
        self.is_connected_without(None)
    }

    fn is_connected_without(&self, removed: Option<usize>) -> bool {
        let n = self.len();
        let Some(start) = (0..n).find(|&v| Some(v) != removed) else {
            return true;
        };
        let mut seen = vec![false; n];
        seen[start] = true;
        let mut stack = vec![start];
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &u in &self.rot[v] {
                if !seen[u] && Some(u) != removed {
                    seen[u] = true;
                    count += 1;
                    stack.push(u);
                }
            }
        }
        count == n - removed.map_or(0, |_| 1)
    }

    pub fn cut_vertices(&self) -> Vec<usize> {
        if self.len() < 3 {
            return Vec::new();
        }
        (0..self.len()).filter(|&v| !self.is_connected_without(Some(v))).collect()
    }

    /// Connected components of the drawing with `v` removed.
    pub fn components_without(&self, v: usize) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut comp = vec![usize::MAX; n];
        let mut out: Vec<Vec<usize>> = Vec::new();
        for s in 0..n {
            if s == v || comp[s] != usize::MAX {
                continue;
            }
            let c = out.len();
            comp[s] = c;
            let mut members = vec![s];
            let mut stack = vec![s];
            while let Some(x) = stack.pop() {
                for &u in &self.rot[x] {
                    if u != v && comp[u] == usize::MAX {
                        comp[u] = c;
                        members.push(u);
                        stack.push(u);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    pub fn is_two_connected(&self) -> bool {
        self.len() >= 3 && self.is_connected() && self.cut_vertices().is_empty()
    }

    /// The subdrawing induced by `keep`, in the given order.
    ///
    /// Corners that lose a neighbour or a face vertex become gaps. The result
    /// is not validated.
    pub fn induced(&self, keep: &[usize]) -> Drawing {
        let mut map = vec![usize::MAX; self.len()];
        for (i, &v) in keep.iter().enumerate() {
            map[v] = i;
        }
        let mut rot = Vec::with_capacity(keep.len());
        let mut gap = Vec::with_capacity(keep.len());
        for &v in keep {
            let k = self.rot[v].len();
            let kept: Vec<usize> = (0..k).filter(|&j| map[self.rot[v][j]] != usize::MAX).collect();
            let mut r = Vec::with_capacity(kept.len());
            let mut g = Vec::with_capacity(kept.len());
            for (t, &j) in kept.iter().enumerate() {
                r.push(map[self.rot[v][j]]);
                let nj = kept[(t + 1) % kept.len()];
                let finite = kept.len() > 1 && nj == (j + 1) % k && !self.gap[v][j];
                g.push(!finite);
            }
            rot.push(r);
            gap.push(g);
        }
        let ids = keep.iter().map(|&v| self.ids[v]).collect();
        let gamma = keep.iter().map(|&v| self.gamma[v]).collect();
        Drawing::raw(ids, gamma, rot, gap).expect("induced subdrawing of a valid drawing")
    }

    /// Same drawing with every rotation reversed (the mirror image).
    pub fn mirrored(&self) -> Drawing {
        let mut rot = self.rot.clone();
        let mut gap = self.gap.clone();
        for v in 0..self.len() {
            let k = rot[v].len();
            if k == 0 {
                continue;
            }
            rot[v].reverse();
            // corner (j, j+1) in the reversed list is the old corner (k-2-j, k-1-j)
            let old = self.gap[v].clone();
            for j in 0..k {
                gap[v][j] = old[(2 * k - 2 - j) % k];
            }
        }
        Drawing { ids: self.ids.clone(), gamma: self.gamma.clone(), rot, gap, adj: self.adj.clone() }
    }

    /// Corners of the infinite region in walking order, as `(vertex, corner index)`.
    pub fn boundary_corners(&self) -> Vec<(usize, usize)> {
        let Some((v0, j0)) = (0..self.len())
            .flat_map(|v| (0..self.rot[v].len()).map(move |j| (v, j)))
            .find(|&(v, j)| self.gap[v][j])
        else {
            return Vec::new();
        };
        let mut out = Vec::new();
        let (mut v, mut j) = (v0, j0);
        loop {
            out.push((v, j));
            let a = self.rot[v][j];
            let k = self.rot[a].len();
            let i = self.index_of_neighbour(a, v).unwrap();
            v = a;
            j = (i + k - 1) % k;
            if (v, j) == (v0, j0) {
                break;
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn wheel(k: usize) -> Drawing {
        let ids = (0..=k as u32).collect();
        let mut gamma = vec![0u8; k + 1];
        gamma[0] = k as u8;
        let faces: Vec<[usize; 3]> = (1..=k).map(|i| [0, i % k + 1, i]).collect();
        Drawing::from_faces(ids, gamma, &faces).unwrap()
    }

    #[test]
    fn wheel_structure() {
        let w = wheel(5);
        assert!(w.is_interior(0));
        assert_eq!(w.degree(0), 5);
        assert_eq!(w.edge_count(), 10);
        assert_eq!(w.faces().len(), 5);
        assert!(w.check_gamma().is_ok());
        assert_eq!(w.center_within_two(), Some(0));
        assert!(w.is_two_connected());
        assert_eq!(w.boundary_corners().len(), 5);
        assert_eq!(w.third(0, 2), Some(1));
        assert!(w.is_face(1, 0, 2));
    }

    #[test]
    fn single_vertex() {
        let d = Drawing::from_faces(vec![7], vec![5], &[]).unwrap();
        assert_eq!(d.len(), 1);
        assert!(!d.is_interior(0));
        assert!(d.check_gamma().is_ok());
    }

    #[test]
    fn quadrilateral_rejected() {
        // a 4-cycle claimed finite at every corner
        let rot = vec![vec![1, 3], vec![2, 0], vec![3, 1], vec![0, 2]];
        let gap = vec![vec![false, true]; 4];
        let err = Drawing::from_rotations(vec![0, 1, 2, 3], vec![0; 4], rot, gap).unwrap_err();
        assert_eq!(err, DrawingError::NotTriangle(0));
    }

    #[test]
    fn path_radius() {
        let n = 6;
        let rot: Vec<Vec<usize>> = (0..n)
            .map(|v| {
                let mut r = Vec::new();
                if v > 0 {
                    r.push(v - 1);
                }
                if v + 1 < n {
                    r.push(v + 1);
                }
                r
            })
            .collect();
        let gap = rot.iter().map(|r| vec![true; r.len()]).collect();
        let d = Drawing::from_rotations((0..n as u32).collect(), vec![0; n], rot, gap).unwrap();
        assert_eq!(d.center_within_two(), None);
        assert_eq!(d.cut_vertices(), vec![1, 2, 3, 4]);
    }

    #[test]
    fn induced_and_mirror() {
        let w = wheel(6);
        let rim = w.induced(&[1, 2, 3]);
        assert!(rim.validate().is_err() || rim.faces().is_empty());
        let fan = w.induced(&[0, 1, 2, 3]);
        fan.validate().unwrap();
        assert_eq!(fan.faces().len(), 2);
        let m = w.mirrored();
        m.validate().unwrap();
        for [a, b, c] in w.faces() {
            assert!(m.is_face(a, c, b));
        }
    }

    #[test]
    fn bowtie_has_cut_vertex() {
        let faces = [[0, 1, 2], [0, 3, 4]];
        let d = Drawing::from_faces((0..5).collect(), vec![0; 5], &faces);
        // two fans at vertex 0 cannot be chained from faces alone
        assert_eq!(d.unwrap_err(), DrawingError::AmbiguousRotation(0));
        let rot = vec![vec![1, 2, 3, 4], vec![2, 0], vec![0, 1], vec![4, 0], vec![0, 3]];
        let gap = vec![
            vec![false, true, false, true],
            vec![false, true],
            vec![false, true],
            vec![false, true],
            vec![false, true],
        ];
        let d = Drawing::from_rotations((0..5).collect(), vec![0; 5], rot, gap).unwrap();
        assert_eq!(d.cut_vertices(), vec![0]);
        assert_eq!(d.components_without(0), vec![vec![1, 2], vec![3, 4]]);
        assert_eq!(d.boundary_corners().len(), 6);
    }
}
