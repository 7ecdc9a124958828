//! Questions: scripted triangle probes that locate a configuration inside a
//! skeleton, plus the independent isomorphism check.

use thiserror::Error;

use crate::drawing::Drawing;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuestionError {
    #[error("questions need at least two vertices")]
    TooSmall,
    #[error("no clockwise triangle reaches vertex {0}")]
    Uncovered(u32),
    #[error("question is malformed: {0}")]
    Malformed(&'static str),
}

/// A probe `(u, v, z)`: `u, v, z` is a clockwise triangle and `z` is new.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Query {
    pub u: usize,
    pub v: usize,
    pub z: usize,
}

/// `z0`, `z1` adjacent, then one query per further vertex. `xi[z]` is the
/// required degree label of `z`'s image, or 0 for no requirement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Question {
    pub z0: usize,
    pub z1: usize,
    pub queries: Vec<Query>,
    pub xi: Vec<u8>,
}

impl Question {
    /// Number of vertices covered.
    pub fn len(&self) -> usize {
        self.queries.len() + 2
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Swaps `u` and `v` in every query after the first two.
    pub fn reflect(&self) -> Question {
        Question {
            queries: self.queries.iter().map(|q| Query { u: q.v, v: q.u, z: q.z }).collect(),
            ..self.clone()
        }
    }

    /// The vertices in visiting order.
    pub fn order(&self) -> Vec<usize> {
        let mut out = vec![self.z0, self.z1];
        out.extend(self.queries.iter().map(|q| q.z));
        out
    }

    /// Checks the question invariants against its enhancement `j`, whose
    /// first `n_config` vertices are the configuration's.
    pub fn validate(&self, j: &Drawing, n_config: usize) -> Result<(), QuestionError> {
        let order = self.order();
        let mut seen = vec![false; j.len()];
        for &z in &order {
            if z >= j.len() || seen[z] {
                return Err(QuestionError::Malformed("vertices repeat or fall outside"));
            }
            seen[z] = true;
        }
        if seen.iter().any(|&s| !s) {
            return Err(QuestionError::Malformed("vertices not covered"));
        }
        if !j.adjacent(self.z0, self.z1) {
            return Err(QuestionError::Malformed("first two vertices not adjacent"));
        }
        if n_config >= 2 && (self.z0 >= n_config || self.z1 >= n_config) {
            return Err(QuestionError::Malformed("first two vertices not in the configuration"));
        }
        for (i, q) in self.queries.iter().enumerate() {
            let before = &order[..i + 2];
            if !before.contains(&q.u) || !before.contains(&q.v) || !j.is_face(q.u, q.v, q.z) {
                return Err(QuestionError::Malformed("query is not a clockwise triangle on visited vertices"));
            }
        }
        for (z, &x) in self.xi.iter().enumerate() {
            let want = if z < n_config { j.gamma(z) } else { 0 };
            if x != want {
                return Err(QuestionError::Malformed("xi disagrees with degree labels"));
            }
        }
        Ok(())
    }
}

/// Builds a question for enhancement `j` of a configuration with `n_config`
/// vertices.
///
/// `z0` is a radius-two centre of the configuration of largest gamma, `z1`
/// its neighbour of largest label; each further vertex is the unvisited one
/// of largest label that closes a clockwise triangle with two visited ones.
pub fn make_question(j: &Drawing, n_config: usize) -> Result<Question, QuestionError> {
    if j.len() < 2 {
        return Err(QuestionError::TooSmall);
    }
    let xi: Vec<u8> = (0..j.len()).map(|v| if v < n_config { j.gamma(v) } else { 0 }).collect();
    let config = j.induced(&(0..n_config).collect::<Vec<_>>());
    let z0 = (0..n_config)
        .filter(|&v| config.distances(v).iter().all(|d| matches!(d, Some(x) if *x <= 2)))
        .max_by_key(|&v| (xi[v], std::cmp::Reverse(v)))
        .unwrap_or(0);
    let z1 = *j
        .neighbours(z0)
        .iter()
        .max_by_key(|&&v| (xi[v], std::cmp::Reverse(v)))
        .ok_or(QuestionError::Uncovered(j.id(z0)))?;
    let mut visited = vec![false; j.len()];
    visited[z0] = true;
    visited[z1] = true;
    let faces = j.faces();
    let mut queries = Vec::new();
    while queries.len() + 2 < j.len() {
        let mut best: Option<Query> = None;
        for &[a, b, c] in &faces {
            for (u, v, z) in [(a, b, c), (b, c, a), (c, a, b)] {
                if visited[u] && visited[v] && !visited[z] {
                    let key = |q: &Query| (xi[q.z], std::cmp::Reverse((q.z, q.u, q.v)));
                    let cand = Query { u, v, z };
                    if best.map_or(true, |b| key(&cand) > key(&b)) {
                        best = Some(cand);
                    }
                }
            }
        }
        let Some(q) = best else {
            let missing = (0..j.len()).find(|&v| !visited[v]).unwrap();
            return Err(QuestionError::Uncovered(j.id(missing)));
        };
        visited[q.z] = true;
        queries.push(q);
    }
    Ok(Question { z0, z1, queries, xi })
}

/// Visits every positive answer of `q` in `k`, as a map from question
/// vertices to `k`'s vertices, until `visit` returns true. Returns whether
/// the visit stopped early.
pub fn for_each_answer(q: &Question, k: &Drawing, mut visit: impl FnMut(&[usize]) -> bool) -> bool {
    let n = q.xi.len();
    let mut f = vec![usize::MAX; n];
    let mut used = vec![false; k.len()];
    let fits = |z: usize, w: usize| q.xi[z] == 0 || k.gamma(w) == q.xi[z];
    for a in 0..k.len() {
        if !fits(q.z0, a) {
            continue;
        }
        for &b in k.neighbours(a) {
            if !fits(q.z1, b) {
                continue;
            }
            f[q.z0] = a;
            f[q.z1] = b;
            used[a] = true;
            used[b] = true;
            let mut placed = Vec::with_capacity(q.queries.len());
            let mut ok = true;
            for qu in &q.queries {
                let (x, y) = (f[qu.u], f[qu.v]);
                match k.third(x, y) {
                    Some(w) if !used[w] && fits(qu.z, w) => {
                        f[qu.z] = w;
                        used[w] = true;
                        placed.push(w);
                    }
                    _ => {
                        ok = false;
                        break;
                    }
                }
            }
            let stop = ok && visit(&f);
            for w in placed {
                used[w] = false;
            }
            used[a] = false;
            used[b] = false;
            if stop {
                return true;
            }
        }
    }
    false
}

/// Checks from first principles that `f` (indexed by `l`'s vertices) maps
/// `l` isomorphically onto an induced subdrawing of `k` with equal labels,
/// taking every clockwise face to a clockwise face, or with `mirrored` every
/// one to a counter-clockwise face.
pub fn check_iso(f: &[usize], l: &Drawing, k: &Drawing, mirrored: bool) -> bool {
    let n = l.len();
    if f.len() < n || f[..n].iter().any(|&x| x >= k.len()) {
        return false;
    }
    for a in 0..n {
        for b in 0..a {
            if f[a] == f[b] {
                return false;
            }
        }
    }
    for a in 0..n {
        if l.gamma(a) != k.gamma(f[a]) {
            return false;
        }
        for b in 0..n {
            if a != b && l.adjacent(a, b) != k.adjacent(f[a], f[b]) {
                return false;
            }
        }
    }
    l.faces().iter().all(|&[a, b, c]| {
        if mirrored {
            k.is_face(f[a], f[c], f[b])
        } else {
            k.is_face(f[a], f[b], f[c])
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle(g: u8) -> Drawing {
        Drawing::from_faces(vec![1, 2, 3], vec![g; 3], &[[0, 1, 2]]).unwrap()
    }

    #[test]
    fn triangle_question() {
        let t = triangle(6);
        let q = make_question(&t, 3).unwrap();
        assert_eq!(q.len(), 3);
        let first = q.queries[0];
        assert_eq!((first.u, first.v), (q.z0, q.z1));
        q.validate(&t, 3).unwrap();
        let r = q.reflect();
        assert_eq!(r.reflect(), q);
        assert_eq!((r.queries[0].u, r.queries[0].v), (q.z1, q.z0));
    }

    #[test]
    fn answers_in_a_wheel() {
        let mut gamma = vec![6u8; 7];
        gamma[0] = 6;
        let faces: Vec<[usize; 3]> = (1..=6).map(|i| [0, i % 6 + 1, i]).collect();
        let w = Drawing::from_faces((0..7).collect(), gamma, &faces).unwrap();
        let t = triangle(6);
        let q = make_question(&t, 3).unwrap();
        let mut count = 0;
        for_each_answer(&q, &w, |f| {
            assert!(check_iso(f, &t, &w, false));
            count += 1;
            false
        });
        // six faces, three rotations each
        assert_eq!(count, 18);
        let q7 = make_question(&triangle(7), 3).unwrap();
        assert!(!for_each_answer(&q7, &w, |_| true));
    }

    #[test]
    fn reflected_question_finds_mirror_image() {
        // a fan of two triangles around vertex 0, labelled so that only one
        // orientation fits the wheel below
        let faces: Vec<[usize; 3]> = (1..=6).map(|i| [0, i % 6 + 1, i]).collect();
        let mut gamma = vec![6u8; 7];
        gamma[1] = 5;
        gamma[2] = 8;
        gamma[3] = 7;
        let w = Drawing::from_faces((0..7).collect(), gamma, &faces).unwrap();
        let fan = Drawing::from_faces(vec![0, 1, 2, 3], vec![6, 5, 8, 7], &[[0, 2, 1], [0, 3, 2]]).unwrap();
        let mirror = fan.mirrored();
        for (l, hits) in [(&fan, (1, 0)), (&mirror, (0, 1))] {
            let q = make_question(l, 4).unwrap();
            let mut plain = 0;
            for_each_answer(&q, &w, |f| {
                assert!(check_iso(f, l, &w, false));
                plain += 1;
                false
            });
            let mut reflected = 0;
            for_each_answer(&q.reflect(), &w, |f| {
                assert!(check_iso(f, l, &w, true));
                reflected += 1;
                false
            });
            assert_eq!((plain, reflected), hits);
        }
    }

    #[test]
    fn check_iso_rejections() {
        let faces: Vec<[usize; 3]> = (1..=5).map(|i| [0, i % 5 + 1, i]).collect();
        let w = Drawing::from_faces((0..6).collect(), vec![5, 6, 6, 6, 6, 6], &faces).unwrap();
        let path = Drawing::from_rotations(
            vec![1, 2],
            vec![6, 6],
            vec![vec![1], vec![0]],
            vec![vec![true], vec![true]],
        )
        .unwrap();
        assert!(check_iso(&[1, 2], &path, &w, false));
        assert!(!check_iso(&[1, 3], &path, &w, false));
        assert!(!check_iso(&[0, 1], &path, &w, false));
        let t = triangle(6);
        // (0, 2, 1) is clockwise in the wheel, (0, 1, 2) only in the mirror
        let hubbed = Drawing::from_faces(vec![1, 2, 3], vec![5, 6, 6], &[[0, 1, 2]]).unwrap();
        assert!(check_iso(&[0, 2, 1], &hubbed, &w, false));
        assert!(!check_iso(&[0, 2, 1], &hubbed, &w, true));
        assert!(check_iso(&[0, 1, 2], &hubbed, &w, true));
        assert!(!check_iso(&[0, 1, 2], &hubbed, &w, false));
        assert!(!check_iso(&[1, 2, 0], &t, &w, false));
    }
}
