//! Good configurations: parsing, free completion, enhancement and questions.

use thiserror::Error;

use crate::drawing::{Drawing, DrawingError};
use crate::input::{content_lines, parse_num, InputError};
use crate::reduce::question::{make_question, Question, QuestionError};

/// Largest degree label a good configuration may carry.
pub const MAX_CONFIG_GAMMA: u8 = 11;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error(transparent)]
    Drawing(#[from] DrawingError),
    #[error("vertex {0} has gamma {1}; good configurations need gamma <= 11")]
    GammaTooLarge(u32, u8),
    #[error("radius exceeds two")]
    Radius,
    #[error("free completion impossible at vertex {0}")]
    Completion(u32),
    #[error("more than one cut vertex")]
    CutVertices,
    #[error("no ring neighbour of cut vertex {0} gives a 2-connected enhancement")]
    Enhancement(u32),
    #[error(transparent)]
    Question(#[from] QuestionError),
}

/// Parsed but unchecked configuration record.
#[derive(Debug, Clone)]
pub struct ConfigRecord {
    pub name: String,
    /// Line of the `config` header.
    pub line: usize,
    pub drawing: Drawing,
}

/// Parses `config <name> <n>` / `v <id> <gamma> : <neighbours>` / `end`
/// records. Neighbours are listed clockwise; a `|` marks where the infinite
/// region lies between two consecutive neighbours. Without any `|`, a
/// vertex whose gamma exceeds its neighbour count has the infinite region
/// after its last listed neighbour.
pub fn parse_configurations(text: &str) -> Result<Vec<ConfigRecord>, InputError> {
    let mut out = Vec::new();
    let mut lines = content_lines(text);
    while let Some((line, body)) = lines.next() {
        let toks: Vec<&str> = body.split_whitespace().collect();
        if toks[0] != "config" || toks.len() != 3 {
            return Err(InputError::new(line, "expected `config <name> <vertices>`"));
        }
        let name = toks[1].to_string();
        let n: usize = parse_num(toks[2], line, "a vertex count")?;
        let mut raw: Vec<(usize, u32, u8, Vec<Option<u32>>)> = Vec::with_capacity(n);
        loop {
            let Some((vl, vb)) = lines.next() else {
                return Err(InputError::new(line, format!("config `{name}` has no `end`")));
            };
            let toks: Vec<&str> = vb.split_whitespace().collect();
            if toks == ["end"] {
                break;
            }
            if toks.len() < 4 || toks[0] != "v" || toks[3] != ":" {
                return Err(InputError::new(vl, "expected `v <id> <gamma> : <neighbours>` or `end`"));
            }
            let id: u32 = parse_num(toks[1], vl, "a vertex id")?;
            let gamma: u8 = parse_num(toks[2], vl, "a degree label")?;
            let mut nbrs = Vec::new();
            for t in &toks[4..] {
                if *t == "|" {
                    nbrs.push(None);
                } else {
                    nbrs.push(Some(parse_num(t, vl, "a neighbour id")?));
                }
            }
            raw.push((vl, id, gamma, nbrs));
        }
        if raw.len() != n {
            return Err(InputError::new(line, format!("config `{name}` declares {n} vertices, lists {}", raw.len())));
        }
        let ids: Vec<u32> = raw.iter().map(|r| r.1).collect();
        let gamma: Vec<u8> = raw.iter().map(|r| r.2).collect();
        let mut rot = Vec::with_capacity(n);
        let mut gap = Vec::with_capacity(n);
        for (vl, _, g, nbrs) in &raw {
            let mut r = Vec::new();
            let mut gp = Vec::new();
            let mut leading = false;
            for tok in nbrs {
                match tok {
                    Some(id) => {
                        let idx = ids
                            .iter()
                            .position(|x| x == id)
                            .ok_or_else(|| InputError::new(*vl, format!("unknown neighbour {id}")))?;
                        r.push(idx);
                        gp.push(false);
                    }
                    None => match gp.last_mut() {
                        Some(last) => *last = true,
                        None => leading = true,
                    },
                }
            }
            if leading {
                if let Some(last) = gp.last_mut() {
                    *last = true;
                }
            }
            let explicit = nbrs.iter().any(Option::is_none);
            if !explicit && (*g as usize) > r.len() && !gp.is_empty() {
                *gp.last_mut().unwrap() = true;
            }
            rot.push(r);
            gap.push(gp);
        }
        let drawing = Drawing::from_rotations(ids, gamma, rot, gap)
            .map_err(|e| InputError::new(line, format!("config `{name}`: {e}")))?;
        out.push(ConfigRecord { name, line, drawing });
    }
    Ok(out)
}

/// Writes `l` as a configuration record, marking every infinite-region
/// corner with `|`.
pub fn render_configuration(name: &str, l: &Drawing) -> String {
    let mut out = format!("config {name} {}\n", l.len());
    for v in 0..l.len() {
        out.push_str(&format!("v {} {} :", l.id(v), l.gamma(v)));
        for (j, &u) in l.neighbours(v).iter().enumerate() {
            out.push_str(&format!(" {}", l.id(u)));
            if l.gaps(v)[j] {
                out.push_str(" |");
            }
        }
        out.push('\n');
    }
    out.push_str("end\n");
    out
}

/// The free completion of `l`: a near-triangulation with `l`'s vertices at
/// the same indices, each of degree exactly gamma, surrounded by a ring of
/// unconstrained vertices (gamma 0) bounding the infinite region.
pub fn free_completion(l: &Drawing) -> Result<Drawing, ConfigError> {
    l.check_gamma()?;
    let n = l.len();
    let next_id = l.ids().iter().max().copied().unwrap_or(0) + 1;
    let mut ids: Vec<u32> = l.ids().to_vec();
    let mut gamma: Vec<u8> = l.gammas().to_vec();
    let mut faces = l.faces();
    if n == 1 {
        let k = l.gamma(0) as usize;
        if k < 3 {
            return Err(ConfigError::Completion(l.id(0)));
        }
        for r in 0..k {
            ids.push(next_id + r as u32);
            gamma.push(0);
            faces.push([0, 1 + r, 1 + (r + 1) % k]);
        }
        return Ok(Drawing::from_faces(ids, gamma, &faces)?);
    }
    let corners = l.boundary_corners();
    let c = corners.len();
    let mut corner_count = vec![0usize; n];
    for &(v, _) in &corners {
        corner_count[v] += 1;
    }
    // ring slots: S_t is shared by boundary edge t and the corners at both ends
    let mut parent: Vec<usize> = (0..c).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    let mut counts = Vec::with_capacity(c);
    for (t, &(v, _)) in corners.iter().enumerate() {
        let deficiency = l.gamma(v) as usize - l.degree(v);
        let k = if corner_count[v] == 1 {
            deficiency
        } else if deficiency == corner_count[v] {
            1
        } else {
            return Err(ConfigError::Completion(l.id(v)));
        };
        if k == 0 {
            return Err(ConfigError::Completion(l.id(v)));
        }
        if k == 1 {
            let a = find(&mut parent, t);
            let b = find(&mut parent, (t + c - 1) % c);
            parent[a] = b;
        }
        counts.push(k);
    }
    let mut slot = vec![usize::MAX; c];
    let add_ring = |ids: &mut Vec<u32>, gamma: &mut Vec<u8>| {
        ids.push(next_id + (ids.len() - n) as u32);
        gamma.push(0);
        ids.len() - 1
    };
    for t in 0..c {
        let r = find(&mut parent, t);
        if slot[r] == usize::MAX {
            slot[r] = add_ring(&mut ids, &mut gamma);
        }
    }
    let shared: Vec<usize> = (0..c).map(|t| slot[find(&mut parent, t)]).collect();
    for (t, &(v, j)) in corners.iter().enumerate() {
        let succ = l.neighbours(v)[j];
        faces.push([v, succ, shared[t]]);
        let k = counts[t];
        if k >= 2 {
            let mut ring = vec![shared[t]];
            for _ in 0..k - 2 {
                ring.push(add_ring(&mut ids, &mut gamma));
            }
            ring.push(shared[(t + c - 1) % c]);
            for w in ring.windows(2) {
                faces.push([v, w[0], w[1]]);
            }
        }
    }
    let l0 = Drawing::from_faces(ids, gamma, &faces).map_err(|_| ConfigError::Completion(l.id(0)))?;
    for v in 0..n {
        if !l0.is_interior(v) || l0.degree(v) != l.gamma(v) as usize {
            return Err(ConfigError::Completion(l.id(v)));
        }
    }
    let boundary = l0.boundary_corners();
    if l0.len() - n < 3 || boundary.len() != l0.len() - n || boundary.iter().any(|&(v, _)| v < n) {
        return Err(ConfigError::Completion(l.id(0)));
    }
    Ok(l0)
}

/// An enhancement `J` of a configuration with its question and reflection.
///
/// `J`'s vertices are the configuration's vertices at the same indices,
/// followed by the chosen ring vertex when one was added.
#[derive(Debug, Clone)]
pub struct Enhancement {
    pub drawing: Drawing,
    pub ring_vertex: Option<usize>,
    pub question: Question,
    pub reflected: Question,
}

/// All enhancements of `l`: `l` itself when it has no cut vertex, else one
/// per ring neighbour of the cut vertex that yields a 2-connected drawing.
pub fn enhancements(l: &Drawing, l0: &Drawing) -> Result<Vec<Drawing>, ConfigError> {
    let n = l.len();
    if n == 1 {
        let ring = l0.neighbours(0)[0];
        let j = l0.induced(&[0, ring]);
        j.validate()?;
        return Ok(vec![j]);
    }
    let cuts = l.cut_vertices();
    match cuts.as_slice() {
        [] => Ok(vec![l.clone()]),
        [v] => {
            let comps = l.components_without(*v);
            let mut out = Vec::new();
            for &r in l0.neighbours(*v) {
                if r < n {
                    continue;
                }
                let touches_all = comps
                    .iter()
                    .all(|comp| comp.iter().any(|&u| l0.adjacent(r, u)));
                if !touches_all {
                    continue;
                }
                let mut keep: Vec<usize> = (0..n).collect();
                keep.push(r);
                let j = l0.induced(&keep);
                if j.validate().is_ok() && j.is_two_connected() {
                    out.push(j);
                }
            }
            if out.is_empty() {
                return Err(ConfigError::Enhancement(l.id(*v)));
            }
            Ok(out)
        }
        _ => Err(ConfigError::CutVertices),
    }
}

/// A configuration from the database with everything the search needs.
#[derive(Debug, Clone)]
pub struct GoodConfiguration {
    pub name: String,
    pub drawing: Drawing,
    pub completion: Drawing,
    pub enhancements: Vec<Enhancement>,
}

impl GoodConfiguration {
    pub fn new(name: impl Into<String>, l: Drawing) -> Result<Self, ConfigError> {
        l.validate()?;
        l.check_gamma()?;
        for v in 0..l.len() {
            if l.gamma(v) > MAX_CONFIG_GAMMA {
                return Err(ConfigError::GammaTooLarge(l.id(v), l.gamma(v)));
            }
        }
        if l.center_within_two().is_none() {
            return Err(ConfigError::Radius);
        }
        let l0 = free_completion(&l)?;
        let mut enh = Vec::new();
        for j in enhancements(&l, &l0)? {
            let question = make_question(&j, l.len())?;
            question.validate(&j, l.len())?;
            let reflected = question.reflect();
            let ring_vertex = (j.len() > l.len()).then_some(l.len());
            enh.push(Enhancement { drawing: j, ring_vertex, question, reflected });
        }
        Ok(GoodConfiguration { name: name.into(), drawing: l, completion: l0, enhancements: enh })
    }
}

/// Parses and checks a whole database; errors carry the record's header line.
pub fn load_database(text: &str) -> Result<Vec<GoodConfiguration>, InputError> {
    parse_configurations(text)?
        .into_iter()
        .map(|r| {
            GoodConfiguration::new(r.name.clone(), r.drawing)
                .map_err(|e| InputError::new(r.line, format!("config `{}`: {e}", r.name)))
        })
        .collect()
}

/// Every record-level finding of a database file. Syntax errors stop the
/// scan at the first one.
pub fn lint_database(text: &str) -> Vec<InputError> {
    match parse_configurations(text) {
        Err(e) => vec![e],
        Ok(recs) => recs
            .into_iter()
            .filter_map(|r| {
                GoodConfiguration::new(r.name.clone(), r.drawing)
                    .err()
                    .map(|e| InputError::new(r.line, format!("config `{}`: {e}", r.name)))
            })
            .collect(),
    }
}
