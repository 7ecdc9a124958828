//! Presentation files and the line-by-line runtime that checks them.

use std::fmt;

use crate::axle::{symmetry_image, Axle, Condition, Degree};
use crate::hubcap::{check_hubcap, Hubcap, Reducer};
use crate::input::{content_lines, parse_num, parse_nums, InputError};
use crate::outlet::{Outlet, PositionedOutlet};

/// A symmetry disposition `(k, ε, M)` naming `M` by the line that pooled it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SymmetryRef {
    pub k: usize,
    pub reflect: bool,
    pub level: usize,
    pub line: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Payload {
    Condition(Condition),
    Reducible,
    Hubcap(Hubcap),
    Symmetry(SymmetryRef),
}

impl Payload {
    pub fn is_condition(&self) -> bool {
        matches!(self, Payload::Condition(_))
    }

    fn tag(&self) -> &'static str {
        match self {
            Payload::Condition(_) => "C",
            Payload::Reducible => "R",
            Payload::Hubcap(_) => "H",
            Payload::Symmetry(_) => "S",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PresentationLine {
    /// Physical 1-based line number.
    pub line: usize,
    pub level: usize,
    pub payload: Payload,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    pub degree: Degree,
    pub lines: Vec<PresentationLine>,
}

fn parse_line(line: usize, body: &str, d: Degree) -> Result<PresentationLine, InputError> {
    let toks: Vec<&str> = body.split_whitespace().collect();
    if toks.len() < 2 {
        return Err(InputError::new(line, "expected `<level> <payload>`"));
    }
    let level: usize = parse_num(toks[0], line, "a level")?;
    let args = &toks[2..];
    let payload = match toks[1] {
        "C" => {
            if args.len() != 2 {
                return Err(InputError::new(line, "condition needs `C n m`"));
            }
            let n: usize = parse_num(args[0], line, "a position")?;
            let m: i32 = parse_num(args[1], line, "a threshold")?;
            Payload::Condition(Condition::new(n, m, d).map_err(|e| InputError::new(line, e.to_string()))?)
        }
        "R" => {
            if !args.is_empty() {
                return Err(InputError::new(line, "reducibility line takes no arguments"));
            }
            Payload::Reducible
        }
        "H" => {
            if args.is_empty() || args.len() % 3 != 0 {
                return Err(InputError::new(line, "hubcap needs `H (x y v)+`"));
            }
            let mut triples = Vec::with_capacity(args.len() / 3);
            for t in args.chunks(3) {
                let x: usize = parse_num(t[0], line, "a spoke")?;
                let y: usize = parse_num(t[1], line, "a spoke")?;
                let v: i32 = parse_num(t[2], line, "a bound")?;
                triples.push((x, y, v));
            }
            Payload::Hubcap(Hubcap::new(&triples, d).map_err(|e| InputError::new(line, e.to_string()))?)
        }
        "S" => {
            if args.len() != 4 {
                return Err(InputError::new(line, "symmetry needs `S k eps l m`"));
            }
            let v: Vec<usize> = parse_nums(args, line, "a nonnegative integer")?;
            if v[0] >= d.get() {
                return Err(InputError::new(line, format!("rotation {} is outside 0..{}", v[0], d.get())));
            }
            if v[1] > 1 {
                return Err(InputError::new(line, "reflection flag must be 0 or 1"));
            }
            Payload::Symmetry(SymmetryRef { k: v[0], reflect: v[1] == 1, level: v[2], line: v[3] })
        }
        other => return Err(InputError::new(line, format!("unknown payload `{other}`"))),
    };
    Ok(PresentationLine { line, level, payload })
}

/// Level-structure findings over parsed lines, in line order.
fn structure_findings(lines: &[PresentationLine]) -> Vec<InputError> {
    let mut out = Vec::new();
    let Some(first) = lines.first() else {
        out.push(InputError::new(1, "presentation has no proof lines"));
        return out;
    };
    if first.level != 0 {
        out.push(InputError::new(first.line, "the first proof line must have level 0"));
    }
    for w in lines.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        if a.level.abs_diff(b.level) != 1 {
            out.push(InputError::new(b.line, "consecutive levels must differ by exactly 1"));
        } else if a.payload.is_condition() && b.level < a.level {
            out.push(InputError::new(b.line, "a condition must be followed by its sub-assertion"));
        } else if !a.payload.is_condition() && b.level > a.level {
            out.push(InputError::new(b.line, "a disposition cannot open a sub-assertion"));
        }
        if a.level == 0 && !a.payload.is_condition() {
            out.push(InputError::new(b.line, "content after the final level-0 disposition"));
        }
    }
    let last = lines.last().unwrap();
    if last.level != 0 || last.payload.is_condition() {
        out.push(InputError::new(last.line, "file must end with a level-0 disposition"));
    }
    out
}

/// Every static finding (syntax, clause checks, level structure) of a
/// presentation file. An empty list means [`parse_presentation`] succeeds.
pub fn lint_presentation(text: &str) -> Vec<InputError> {
    scan(text).1
}

/// Parses a presentation, reporting the first finding.
pub fn parse_presentation(text: &str) -> Result<Presentation, InputError> {
    let (p, mut findings) = scan(text);
    match p {
        Some(p) if findings.is_empty() => Ok(p),
        _ => Err(findings.remove(0)),
    }
}

fn scan(text: &str) -> (Option<Presentation>, Vec<InputError>) {
    let mut findings = Vec::new();
    let mut it = content_lines(text);
    let Some((dl, body)) = it.next() else {
        return (None, vec![InputError::new(1, "empty presentation")]);
    };
    let toks: Vec<&str> = body.split_whitespace().collect();
    let degree = match toks.as_slice() {
        ["degree", d] => parse_num::<usize>(d, dl, "a degree")
            .and_then(|d| Degree::new(d).map_err(|e| InputError::new(dl, e.to_string()))),
        _ => Err(InputError::new(dl, "expected `degree <d>`")),
    };
    let degree = match degree {
        Ok(d) => d,
        Err(e) => return (None, vec![e]),
    };
    let mut lines = Vec::new();
    let mut broken = false;
    for (line, body) in it {
        match parse_line(line, body, degree) {
            Ok(l) => lines.push(l),
            Err(e) => {
                findings.push(e);
                broken = true;
            }
        }
    }
    if !broken {
        findings.extend(structure_findings(&lines));
    }
    findings.sort_by_key(|e| e.line);
    (Some(Presentation { degree, lines }), findings)
}

/// An outlet in the pool: the fan-free branch axle of a completed
/// sub-assertion, tagged with the condition line that opened it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PoolEntry {
    pub line: usize,
    pub level: usize,
    pub axle: Axle,
    pub outlet: Outlet,
}

/// One trace record per processed line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceRecord {
    pub line: usize,
    pub level: usize,
    pub rule: String,
    pub axle: String,
    pub verdict: &'static str,
}

impl fmt::Display for TraceRecord {
    /// Stable `v1` format: five tab-separated fields.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}\t{}\t{}\t{}\t{}", self.line, self.level, self.rule, self.axle, self.verdict)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunFailure {
    pub line: usize,
    pub reason: String,
    /// The conditions leading to the failing branch, as `(line, condition)`.
    pub trail: Vec<(usize, Condition)>,
}

impl fmt::Display for RunFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.reason)?;
        if !self.trail.is_empty() {
            let parts: Vec<String> = self.trail.iter().map(|(l, c)| format!("{c}@{l}")).collect();
            write!(f, " [branch {}]", parts.join(" "))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RunSummary {
    pub lines: usize,
    pub conditions: usize,
    pub hubcaps: usize,
    pub reducible: usize,
    pub symmetries: usize,
    pub pooled: usize,
}

/// Whether every cartwheel compatible with `a` is compatible with
/// `τ^k σ^ε M`, checked entrywise over hub, spokes and hats.
pub fn symmetry_holds(a: &Axle, m: &Axle, k: usize, reflect: bool) -> bool {
    let d = a.degree();
    (0..=2 * d.get()).all(|i| {
        let p = symmetry_image(i, k, reflect, d);
        a.bounds(p).within(m.bounds(i))
    })
}

/// Executes a parsed presentation against the outlet table and reducer.
pub struct Runtime<'a, R: Reducer + ?Sized> {
    pub outlets: &'a [Outlet],
    pub reducer: &'a R,
    pub parallel: bool,
}

impl<'a, R: Reducer + ?Sized> Runtime<'a, R> {
    pub fn new(outlets: &'a [Outlet], reducer: &'a R) -> Self {
        Runtime { outlets, reducer, parallel: false }
    }

    pub fn run(
        &self,
        p: &Presentation,
        mut trace: Option<&mut dyn FnMut(&TraceRecord)>,
    ) -> Result<RunSummary, RunFailure> {
        let d = p.degree;
        let omega = Axle::trivial(d);
        let mut axles: Vec<Axle> = vec![omega];
        let mut conds: Vec<(usize, Condition)> = Vec::new();
        let mut pending: Vec<Option<PoolEntry>> = Vec::new();
        let mut pool: Vec<PoolEntry> = Vec::new();
        let mut summary = RunSummary::default();
        debug_assert!(structure_findings(&p.lines).is_empty());

        for pl in &p.lines {
            let l = pl.level;
            let fail = |reason: String, conds: &[(usize, Condition)]| RunFailure {
                line: pl.line,
                reason,
                trail: conds[..l.min(conds.len())].to_vec(),
            };
            if axles.len() <= l {
                return Err(fail("level has no open branch".into(), &conds));
            }
            let a = axles[l];
            let mut emit = |verdict: &'static str| {
                if let Some(t) = trace.as_deref_mut() {
                    let rule = match &pl.payload {
                        Payload::Condition(c) => format!("C{c}"),
                        Payload::Symmetry(s) => {
                            format!("S({},{},{},{})", s.k, s.reflect as u8, s.level, s.line)
                        }
                        other => other.tag().to_string(),
                    };
                    t(&TraceRecord { line: pl.line, level: l, rule, axle: a.digest(), verdict });
                }
            };
            summary.lines += 1;
            match &pl.payload {
                Payload::Condition(c) => {
                    let (Ok(child), Ok(rest)) = (a.wedge(*c), c.negate().and_then(|n| a.wedge(n))) else {
                        emit("fail");
                        return Err(fail(format!("condition {c} is not compatible with the branch axle"), &conds));
                    };
                    debug_assert!(splits(&a, &child, &rest, c.n));
                    axles.truncate(l + 1);
                    axles[l] = rest;
                    axles.push(child);
                    conds.truncate(l);
                    pending.truncate(l);
                    let mut b = Some(omega);
                    for &(_, h) in conds.iter().chain(std::iter::once(&(pl.line, *c))) {
                        b = b.and_then(|b| b.wedge(h).ok());
                    }
                    let entry = b.filter(|b| b.is_fan_free()).map(|b| PoolEntry {
                        line: pl.line,
                        level: l,
                        outlet: Outlet::from_axle(&b).expect("fan-free axle"),
                        axle: b,
                    });
                    conds.push((pl.line, *c));
                    pending.push(entry);
                    summary.conditions += 1;
                    emit("split");
                }
                disp => {
                    let verdict = match disp {
                        Payload::Reducible => {
                            summary.reducible += 1;
                            self.reducer.reduce(&a)
                        }
                        Payload::Hubcap(h) => {
                            summary.hubcaps += 1;
                            check_hubcap(&a, h, self.outlets, self.reducer, self.parallel)
                                .map_err(|e| e.to_string())
                        }
                        Payload::Symmetry(s) => {
                            summary.symmetries += 1;
                            self.symmetry(&a, s, &pool)
                        }
                        Payload::Condition(_) => unreachable!(),
                    };
                    if let Err(reason) = verdict {
                        emit("fail");
                        return Err(fail(reason, &conds));
                    }
                    emit("ok");
                    let keep = pool.iter().position(|e| e.level >= l).unwrap_or(pool.len());
                    pool.truncate(keep);
                    debug_assert!(pool.iter().all(|e| e.level < l));
                    if l > 0 {
                        if let Some(entry) = pending[l - 1].take() {
                            pool.push(entry);
                            summary.pooled += 1;
                        }
                    }
                }
            }
        }
        Ok(summary)
    }

    fn symmetry(&self, a: &Axle, s: &SymmetryRef, pool: &[PoolEntry]) -> Result<(), String> {
        let Some(m) = pool.iter().find(|e| e.line == s.line && e.level == s.level) else {
            return Err(format!("no pooled outlet from line {} at level {}", s.line, s.level));
        };
        let holds = symmetry_holds(a, &m.axle, s.k, s.reflect);
        if !s.reflect {
            debug_assert_eq!(holds, PositionedOutlet::new(&m.outlet, s.k + 1).enforced_by(a));
        }
        if holds {
            Ok(())
        } else {
            Err(format!(
                "branch axle {} is not contained in the image of line {} under rotation {} reflection {}",
                a.digest(),
                s.line,
                s.k,
                s.reflect as u8
            ))
        }
    }
}

/// The two children of a split partition the parent at position `n` and
/// agree with it elsewhere.
fn splits(parent: &Axle, child: &Axle, rest: &Axle, n: usize) -> bool {
    let d = parent.degree().positions();
    let same = (0..=d).filter(|&i| i != n).all(|i| child.bounds(i) == parent.bounds(i) && rest.bounds(i) == parent.bounds(i));
    let (p, c, r) = (parent.bounds(n), child.bounds(n), rest.bounds(n));
    let (lo, hi) = if c.lo > r.hi { (r, c) } else { (c, r) };
    let adjacent = lo.hi + 1 == hi.lo || (lo.hi == 8 && hi.lo == 9);
    same && adjacent && lo.lo == p.lo && hi.hi == p.hi && lo.hi < hi.lo
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hubcap::NeverReducible;

    const EMPTY7: &str = "degree 7\n0 H 1 1 0 2 2 0 3 3 0 4 4 0 5 5 0 6 6 0 7 7 0\n";

    fn run(text: &str) -> Result<RunSummary, RunFailure> {
        let p = parse_presentation(text).unwrap();
        Runtime::new(&[], &NeverReducible).run(&p, None)
    }

    #[test]
    fn parse_synthetic() {
        let p = parse_presentation(EMPTY7).unwrap();
        assert_eq!(p.degree.get(), 7);
        assert_eq!(p.lines.len(), 1);
        assert_eq!(p.lines[0].line, 2);
        assert!(matches!(p.lines[0].payload, Payload::Hubcap(_)));
        let c = parse_presentation("degree 7\n0 C 1 6\n1 R\n0 R\n").unwrap();
        assert_eq!(c.lines[0].payload, Payload::Condition(Condition { n: 1, m: 6 }));
    }

    #[test]
    fn structural_errors() {
        assert_eq!(parse_presentation("degree 7\n2 C 1 6\n").unwrap_err().line, 2);
        let jump = "degree 7\n0 C 1 6\n2 R\n0 R\n";
        let f = lint_presentation(jump);
        assert!(f.iter().any(|e| e.line == 3 && e.message.contains("differ by exactly 1")));
        assert_eq!(parse_presentation("degree 7\n0 R\n1 R\n").unwrap_err().line, 3);
        assert_eq!(parse_presentation("degree 7\n0 C 1 6\n1 R\n").unwrap_err().line, 3);
        assert_eq!(parse_presentation("degree 7\n0 C 1 6\n1 R\n0 X\n").unwrap_err().line, 4);
        assert_eq!(parse_presentation("degree 7\n# c\n\n0 C 1 6\n1 C 2 6\n0 R\n").unwrap_err().line, 6);
    }

    #[test]
    fn synthetic_runs() {
        assert_eq!(run(EMPTY7).unwrap().hubcaps, 1);
        let bad = EMPTY7.replacen("1 1 0", "1 1 -1", 1);
        let f = run(&bad).unwrap_err();
        assert_eq!(f.line, 2);
        let incompatible = "degree 7\n0 C 15 6\n1 R\n0 R\n";
        assert_eq!(run(incompatible).unwrap_err().line, 2);
    }

    #[test]
    fn reducibility_and_trail() {
        let text = "degree 7\n0 C 1 6\n1 C 2 6\n2 R\n1 R\n0 R\n";
        let p = parse_presentation(text).unwrap();
        let only_first = |a: &Axle| a.lo(1) >= 6 && a.lo(2) >= 6;
        let f = Runtime::new(&[], &only_first).run(&p, None).unwrap_err();
        assert_eq!(f.line, 5);
        assert_eq!(f.trail, vec![(2, Condition { n: 1, m: 6 })]);
        let all = |_: &Axle| true;
        let mut records = Vec::new();
        let mut sink = |r: &TraceRecord| records.push(r.to_string());
        let s = Runtime::new(&[], &all).run(&p, Some(&mut sink)).unwrap();
        assert_eq!(s.reducible, 3);
        assert_eq!(records.len(), 5);
        assert_eq!(records[0], "2\t0\tC(1,6)\t*\tsplit");
        assert_eq!(records[2], "4\t2\tR\t1:6-12,2:6-12\tok");
        assert_eq!(records[4], "6\t0\tR\t1:5-5\tok");
    }

    #[test]
    fn symmetry_uses_completed_branches_only() {
        // the branch of line 2 may be reused once its sub-assertion is done
        let ok = "degree 7\n0 C 1 6\n1 R\n0 C 2 6\n1 S 1 0 0 2\n0 R\n";
        let p = parse_presentation(ok).unwrap();
        let s = Runtime::new(&[], &|a: &Axle| a.lo(1) >= 6 || a.hi(2) <= 5).run(&p, None);
        let s = s.unwrap_or_else(|e| panic!("{e}"));
        assert_eq!(s.symmetries, 1);
        assert_eq!(s.pooled, 2);
        // a line cannot cite its own open branch
        let circular = "degree 7\n0 C 1 6\n1 S 0 0 0 2\n0 R\n";
        let p = parse_presentation(circular).unwrap();
        let f = Runtime::new(&[], &|_: &Axle| true).run(&p, None).unwrap_err();
        assert_eq!(f.line, 3);
        assert!(f.reason.contains("no pooled outlet"));
    }

    #[test]
    fn symmetry_reflection() {
        let d = Degree::new(7).unwrap();
        let m = Axle::trivial(d).wedge(Condition { n: 1, m: 6 }).unwrap();
        // σ sends spoke 1 to spoke 7
        let a7 = Axle::trivial(d).wedge(Condition { n: 7, m: 6 }).unwrap();
        assert!(symmetry_holds(&m, &m, 0, false));
        assert!(symmetry_holds(&a7, &m, 0, true));
        assert!(!symmetry_holds(&a7, &m, 0, false));
        assert!(symmetry_holds(&a7, &m, 6, false));
        let sym = m.wedge(Condition { n: 7, m: 6 }).unwrap();
        assert!(symmetry_holds(&sym, &sym, 0, true));
    }
}
