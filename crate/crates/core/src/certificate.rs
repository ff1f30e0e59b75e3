//! Move scripts: a line-oriented text format, parser, serializer and replay.
//!
//! ```text
//! # comment
//! genus 4
//! var n
//! source gluck_T.json
//! twist v=[0,0,1,0,0,0,0,0] k=1+2n
//! expect file=theorem2_step1.json
//! slide f=beta i=2 j=1 m=1
//! negate f=alpha i=3
//! permute f=gamma p=[2,1,3,4]
//! expect inline={"genus": 4, ...}
//! final file=theorem2_final.json
//! ```
//!
//! `expect` attaches to the move right above it; `final` checks the matrix
//! after the last move.

use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::corpus::{DataStore, THEOREM2_CERT};
use crate::diagram::{self, Family, RowMismatch, TrisectionMatrix};
use crate::exactalg::{domain_warning, HClass, IntPoly};
use crate::format::{parse_matrix, write_matrix_compact};
use crate::moves::{apply, Move};
use crate::standardness::{is_standard_position, StandardAssignment};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CertError {
    #[error("line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("certificate is for genus {cert}, matrix has genus {matrix}")]
    Genus { cert: usize, matrix: usize },
    #[error("cannot load expected matrix {name:?}: {msg}")]
    Expect { name: String, msg: String },
    #[error("step {step}: {msg}")]
    Move { step: usize, msg: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expectation {
    File(String),
    Inline(TrisectionMatrix),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub mv: Move,
    pub expect: Option<Expectation>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Certificate {
    pub genus: usize,
    /// Always `n` when present.
    pub variable: Option<String>,
    pub source: Option<String>,
    pub steps: Vec<Step>,
    pub footer: Option<Expectation>,
}

struct Cursor<'a> {
    line_no: usize,
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn err(&self, col: usize, msg: impl Into<String>) -> CertError {
        CertError::Syntax { line: self.line_no, col: col + 1, msg: msg.into() }
    }

    fn skip_ws(&mut self) {
        while self.text[self.pos..].starts_with(char::is_whitespace) {
            self.pos += self.text[self.pos..].chars().next().unwrap().len_utf8();
        }
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos >= self.text.len()
    }

    fn word(&mut self) -> (usize, &'a str) {
        self.skip_ws();
        let start = self.pos;
        let len = self.text[start..]
            .find(char::is_whitespace)
            .unwrap_or(self.text.len() - start);
        self.pos += len;
        (start, &self.text[start..start + len])
    }

    /// `key=value`; bracketed values may contain spaces, `inline` takes the rest of the line.
    fn key_value(&mut self) -> Result<(usize, &'a str, usize, &'a str), CertError> {
        self.skip_ws();
        let kstart = self.pos;
        let eq = self.text[kstart..]
            .find('=')
            .map(|i| kstart + i)
            .filter(|&i| !self.text[kstart..i].contains(char::is_whitespace))
            .ok_or_else(|| self.err(kstart, "expected key=value"))?;
        let key = &self.text[kstart..eq];
        let vstart = eq + 1;
        let rest = &self.text[vstart..];
        let vlen = if key == "inline" {
            rest.trim_end().len()
        } else if rest.starts_with('[') {
            rest.find(']').map(|i| i + 1).ok_or_else(|| self.err(vstart, "unclosed '['"))?
        } else {
            rest.find(char::is_whitespace).unwrap_or(rest.len())
        };
        if vlen == 0 {
            return Err(self.err(vstart, format!("empty value for {key}")));
        }
        self.pos = vstart + vlen;
        Ok((kstart, key, vstart, &self.text[vstart..vstart + vlen]))
    }
}

struct Args<'a> {
    pairs: Vec<(usize, &'a str, usize, &'a str)>,
}

impl<'a> Args<'a> {
    fn read(cur: &mut Cursor<'a>, allowed: &[&str]) -> Result<Args<'a>, CertError> {
        let mut pairs: Vec<(usize, &str, usize, &str)> = Vec::new();
        while !cur.at_end() {
            let kv = cur.key_value()?;
            if !allowed.contains(&kv.1) {
                return Err(cur.err(kv.0, format!("unknown key {:?}", kv.1)));
            }
            if pairs.iter().any(|p| p.1 == kv.1) {
                return Err(cur.err(kv.0, format!("duplicate key {:?}", kv.1)));
            }
            pairs.push(kv);
        }
        Ok(Args { pairs })
    }

    fn get(&self, cur: &Cursor, key: &str) -> Result<(usize, &'a str), CertError> {
        self.pairs
            .iter()
            .find(|p| p.1 == key)
            .map(|p| (p.2, p.3))
            .ok_or_else(|| cur.err(cur.text.len(), format!("missing {key}=")))
    }
}

fn parse_poly(cur: &Cursor, col: usize, s: &str) -> Result<IntPoly, CertError> {
    s.parse().map_err(|e| cur.err(col, format!("{e}")))
}

fn parse_index(cur: &Cursor, col: usize, s: &str) -> Result<usize, CertError> {
    s.parse().map_err(|_| cur.err(col, format!("bad index {s:?}")))
}

fn parse_list(cur: &Cursor, col: usize, s: &str) -> Result<Vec<String>, CertError> {
    let inner = s
        .strip_prefix('[')
        .and_then(|x| x.strip_suffix(']'))
        .ok_or_else(|| cur.err(col, "expected [..]"))?;
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    Ok(inner.split(',').map(|x| x.trim().to_string()).collect())
}

fn parse_family(cur: &Cursor, col: usize, s: &str) -> Result<Family, CertError> {
    s.parse().map_err(|_| cur.err(col, format!("unknown family {s:?}")))
}

fn parse_expectation(cur: &Cursor, args: &Args, genus: usize) -> Result<Expectation, CertError> {
    match (args.pairs.first(), args.pairs.len()) {
        (Some(&(_, "file", _, name)), 1) => Ok(Expectation::File(name.to_string())),
        (Some(&(_, "inline", col, json)), 1) => {
            let m = parse_matrix(json).map_err(|e| cur.err(col, format!("inline matrix: {e}")))?;
            if m.genus() != genus {
                return Err(cur.err(col, format!("inline matrix has genus {}, expected {genus}", m.genus())));
            }
            Ok(Expectation::Inline(m))
        }
        _ => Err(cur.err(0, "expected exactly one of file= or inline=")),
    }
}

impl Certificate {
    pub fn parse(text: &str) -> Result<Certificate, CertError> {
        let mut cert = Certificate::default();
        let mut genus: Option<usize> = None;
        for (i, raw) in text.lines().enumerate() {
            let content = match raw.find('#') {
                // '#' inside inline JSON labels is allowed
                Some(p) if !raw[..p].contains("inline=") => &raw[..p],
                _ => raw,
            };
            let mut cur = Cursor { line_no: i + 1, text: content, pos: 0 };
            if cur.at_end() {
                continue;
            }
            let (col, directive) = cur.word();
            let need_genus = |cur: &Cursor| genus.ok_or_else(|| cur.err(col, "`genus` must come first"));
            match directive {
                "genus" => {
                    if genus.is_some() {
                        return Err(cur.err(col, "duplicate genus"));
                    }
                    let (c, w) = cur.word();
                    let g = w.parse().map_err(|_| cur.err(c, format!("bad genus {w:?}")))?;
                    if !cur.at_end() {
                        return Err(cur.err(cur.pos, "trailing text"));
                    }
                    genus = Some(g);
                    cert.genus = g;
                }
                "var" => {
                    let (c, w) = cur.word();
                    if w != "n" {
                        return Err(cur.err(c, format!("unsupported variable {w:?}")));
                    }
                    cert.variable = Some(w.to_string());
                }
                "source" => {
                    let (c, w) = cur.word();
                    if w.is_empty() {
                        return Err(cur.err(c, "missing source"));
                    }
                    cert.source = Some(w.to_string());
                }
                "twist" | "slide" | "negate" | "permute" => {
                    let g = need_genus(&cur)?;
                    let mv = parse_move(&mut cur, directive, g)?;
                    cert.steps.push(Step { mv, expect: None });
                }
                "expect" => {
                    let g = need_genus(&cur)?;
                    let args = Args::read(&mut cur, &["file", "inline"])?;
                    let e = parse_expectation(&cur, &args, g)?;
                    let step = cert
                        .steps
                        .last_mut()
                        .ok_or_else(|| cur.err(col, "expect before any move"))?;
                    if step.expect.is_some() {
                        return Err(cur.err(col, "step already has an expect"));
                    }
                    step.expect = Some(e);
                }
                "final" => {
                    let g = need_genus(&cur)?;
                    let args = Args::read(&mut cur, &["file", "inline"])?;
                    if cert.footer.is_some() {
                        return Err(cur.err(col, "duplicate final"));
                    }
                    cert.footer = Some(parse_expectation(&cur, &args, g)?);
                }
                other => return Err(cur.err(col, format!("unknown directive {other:?}"))),
            }
        }
        if genus.is_none() {
            return Err(CertError::Syntax { line: 0, col: 0, msg: "missing `genus`".into() });
        }
        Ok(cert)
    }

    /// Canonical text; `parse(serialize(c)) == c`.
    pub fn serialize(&self) -> String {
        let mut s = String::new();
        writeln!(s, "genus {}", self.genus).unwrap();
        if let Some(v) = &self.variable {
            writeln!(s, "var {v}").unwrap();
        }
        if let Some(src) = &self.source {
            writeln!(s, "source {src}").unwrap();
        }
        let expectation = |e: &Expectation| match e {
            Expectation::File(f) => format!("file={f}"),
            Expectation::Inline(m) => format!("inline={}", write_matrix_compact(m)),
        };
        for step in &self.steps {
            writeln!(s, "{}", step.mv).unwrap();
            if let Some(e) = &step.expect {
                writeln!(s, "expect {}", expectation(e)).unwrap();
            }
        }
        if let Some(e) = &self.footer {
            writeln!(s, "final {}", expectation(e)).unwrap();
        }
        s
    }

    /// A certificate from a bare move list.
    pub fn from_moves(genus: usize, moves: Vec<Move>) -> Certificate {
        let variable = moves.iter().any(Move::is_symbolic).then(|| "n".to_string());
        Certificate {
            genus,
            variable,
            source: None,
            steps: moves.into_iter().map(|mv| Step { mv, expect: None }).collect(),
            footer: None,
        }
    }

    pub fn moves(&self) -> impl Iterator<Item = &Move> {
        self.steps.iter().map(|s| &s.mv)
    }

    /// Reversed, inverted steps with all assertions stripped.
    pub fn inverse(&self) -> Certificate {
        Certificate {
            genus: self.genus,
            variable: self.variable.clone(),
            source: None,
            steps: self
                .steps
                .iter()
                .rev()
                .map(|s| Step { mv: s.mv.inverse(), expect: None })
                .collect(),
            footer: None,
        }
    }

    /// The bundled reduction of `T(n)`.
    pub fn bundled() -> Certificate {
        let text = DataStore::Embedded.read(THEOREM2_CERT).expect("bundled certificate");
        Certificate::parse(&text).expect("bundled certificate parses")
    }
}

fn parse_move(cur: &mut Cursor, directive: &str, g: usize) -> Result<Move, CertError> {
    let start = cur.pos;
    let mv = match directive {
        "twist" => {
            let args = Args::read(cur, &["v", "k"])?;
            let (vc, v) = args.get(cur, "v")?;
            let (kc, k) = args.get(cur, "k")?;
            let entries = parse_list(cur, vc, v)?
                .iter()
                .map(|x| parse_poly(cur, vc, x))
                .collect::<Result<Vec<_>, _>>()?;
            Move::Twist { v: HClass(entries), k: parse_poly(cur, kc, k)? }
        }
        "slide" => {
            let args = Args::read(cur, &["f", "i", "j", "m"])?;
            let (fc, f) = args.get(cur, "f")?;
            let (ic, i) = args.get(cur, "i")?;
            let (jc, j) = args.get(cur, "j")?;
            let (mc, m) = args.get(cur, "m")?;
            Move::Slide {
                family: parse_family(cur, fc, f)?,
                target: parse_index(cur, ic, i)?,
                source: parse_index(cur, jc, j)?,
                m: parse_poly(cur, mc, m)?,
            }
        }
        "negate" => {
            let args = Args::read(cur, &["f", "i"])?;
            let (fc, f) = args.get(cur, "f")?;
            let (ic, i) = args.get(cur, "i")?;
            Move::Negate { family: parse_family(cur, fc, f)?, index: parse_index(cur, ic, i)? }
        }
        "permute" => {
            let args = Args::read(cur, &["f", "p"])?;
            let (fc, f) = args.get(cur, "f")?;
            let (pc, p) = args.get(cur, "p")?;
            let perm = parse_list(cur, pc, p)?
                .iter()
                .map(|x| parse_index(cur, pc, x))
                .collect::<Result<Vec<_>, _>>()?;
            Move::Permute { family: parse_family(cur, fc, f)?, perm }
        }
        _ => unreachable!(),
    };
    mv.check(g).map_err(|e| cur.err(start, e.to_string()))?;
    Ok(mv)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ReplayOptions {
    /// Abort at the first failed assertion.
    pub strict: bool,
    /// Substitute `n ← n0` into the input, the moves and every expected matrix.
    pub n: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StepOutcome {
    /// 1-based step number
    pub step: usize,
    #[serde(rename = "move")]
    pub mv: String,
    /// `None` when the step has no assertion.
    pub passed: Option<bool>,
    pub expected: Option<String>,
    pub mismatches: Vec<RowMismatch>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReplayResult {
    #[serde(skip)]
    pub final_matrix: TrisectionMatrix,
    pub steps: Vec<StepOutcome>,
    pub footer_passed: Option<bool>,
    pub footer_mismatches: Vec<RowMismatch>,
    /// Step at which strict mode stopped.
    pub aborted_at: Option<usize>,
    pub standard: Option<StandardAssignment>,
    pub warnings: Vec<String>,
}

impl ReplayResult {
    pub fn assertions_passed(&self) -> bool {
        self.aborted_at.is_none()
            && self.steps.iter().all(|s| s.passed != Some(false))
            && self.footer_passed != Some(false)
    }

    pub fn assertion_count(&self) -> usize {
        self.steps.iter().filter(|s| s.passed.is_some()).count()
    }

    pub fn first_failure(&self) -> Option<&StepOutcome> {
        self.steps.iter().find(|s| s.passed == Some(false))
    }
}

/// Resolver for `expect file=` references backed by a data store.
pub fn store_resolver(store: &DataStore) -> impl Fn(&str) -> Result<TrisectionMatrix, String> + '_ {
    move |name| store.matrix(name).map_err(|e| e.to_string())
}

/// Applies the certificate's moves to `d`, checking every assertion.
pub fn replay(
    d: &TrisectionMatrix,
    cert: &Certificate,
    opts: ReplayOptions,
    resolve: &dyn Fn(&str) -> Result<TrisectionMatrix, String>,
) -> Result<ReplayResult, CertError> {
    if d.genus() != cert.genus {
        return Err(CertError::Genus { cert: cert.genus, matrix: d.genus() });
    }
    let mut warnings = Vec::new();
    let eval = |m: TrisectionMatrix| match opts.n {
        Some(n0) => m.evaluate(n0),
        None => m,
    };
    if let Some(w) = opts.n.and_then(domain_warning) {
        warnings.push(w);
    }
    let load = |e: &Expectation| -> Result<(TrisectionMatrix, String), CertError> {
        let (m, name) = match e {
            Expectation::File(name) => {
                let m = resolve(name).map_err(|msg| CertError::Expect { name: name.clone(), msg })?;
                (m, name.clone())
            }
            Expectation::Inline(m) => (m.clone(), "inline".to_string()),
        };
        Ok((eval(m), name))
    };
    let compare = |found: &TrisectionMatrix, expected: &TrisectionMatrix| match diagram::mismatches(found, expected) {
        Ok(mm) => mm,
        Err(note) => vec![RowMismatch {
            family: Family::Alpha,
            index: 0,
            found: note.clone(),
            expected: note,
        }],
    };

    let mut cur = eval(d.clone());
    let mut steps = Vec::with_capacity(cert.steps.len());
    let mut aborted_at = None;
    for (i, step) in cert.steps.iter().enumerate() {
        let mv = match opts.n {
            Some(n0) => step.mv.evaluate(n0),
            None => step.mv.clone(),
        };
        warnings.extend(
            mv.check(cur.genus())
                .map_err(|e| CertError::Move { step: i + 1, msg: e.to_string() })?
                .into_iter()
                .map(|w| format!("step {}: {w}", i + 1)),
        );
        cur = apply(&cur, &mv).map_err(|e| CertError::Move { step: i + 1, msg: e.to_string() })?;
        let mut outcome = StepOutcome {
            step: i + 1,
            mv: step.mv.to_string(),
            passed: None,
            expected: None,
            mismatches: Vec::new(),
        };
        if let Some(e) = &step.expect {
            let (expected, name) = load(e)?;
            outcome.mismatches = compare(&cur, &expected);
            outcome.passed = Some(outcome.mismatches.is_empty());
            outcome.expected = Some(name);
        }
        let failed = outcome.passed == Some(false);
        steps.push(outcome);
        if failed && opts.strict {
            aborted_at = Some(i + 1);
            break;
        }
    }
    let (footer_passed, footer_mismatches) = match (&cert.footer, aborted_at) {
        (Some(e), None) => {
            let (expected, _) = load(e)?;
            let mm = compare(&cur, &expected);
            (Some(mm.is_empty()), mm)
        }
        _ => (None, Vec::new()),
    };
    let standard = is_standard_position(&cur);
    Ok(ReplayResult {
        final_matrix: cur,
        steps,
        footer_passed,
        footer_mismatches,
        aborted_at,
        standard,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::standard_sphere;
    use crate::exactalg::SymplecticSpace;

    fn syntax_line(e: CertError) -> usize {
        match e {
            CertError::Syntax { line, .. } => line,
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn parses_display_style_lines() {
        let c = Certificate::parse("genus 4\ntwist v=[0,0,1,0,0,0,0,0] k=1+2n\n").unwrap();
        assert_eq!(
            c.steps[0].mv,
            Move::twist(SymplecticSpace::new(4).basis(3), IntPoly::linear(1, 2))
        );
        let c = Certificate::parse("genus 4\nslide f=beta i=2 j=1 m=1\n").unwrap();
        assert_eq!(c.steps[0].mv, Move::slide(Family::Beta, 2, 1, 1));
        let c = Certificate::parse("genus 2\npermute f=gamma p=[2, 1]  # swap\nnegate f=alpha i=2").unwrap();
        assert_eq!(c.steps.len(), 2);
    }

    #[test]
    fn parse_errors_carry_positions() {
        let e = Certificate::parse("genus 4\nslide f=alpha i=1 j=1 m=1\n").unwrap_err();
        assert_eq!(syntax_line(e), 2);
        let e = Certificate::parse("genus 4\n\nfrobnicate x=1\n").unwrap_err();
        assert_eq!(syntax_line(e), 3);
        assert!(Certificate::parse("genus 2\npermute f=beta p=[1,1]").is_err());
        assert!(Certificate::parse("genus 2\ntwist v=[1,0,0] k=1").is_err());
        assert!(Certificate::parse("genus 2\nslide f=alpha i=1 j=2").is_err());
        assert!(Certificate::parse("genus 2\nslide f=alpha i=1 j=2 m=1 m=2").is_err());
        assert!(Certificate::parse("genus 2\nslide f=delta i=1 j=2 m=1").is_err());
        assert!(Certificate::parse("genus 2\nslide f=alpha i=1 j=2 m=1+2x").is_err());
        assert!(Certificate::parse("slide f=alpha i=1 j=2 m=1").is_err());
        assert!(Certificate::parse("genus 2\nexpect file=x.json").is_err());
        assert!(Certificate::parse("").is_err());
        let e = Certificate::parse("genus 2\nslide f=alpha i=1 j=2 m=1\nexpect file=a\nexpect file=b").unwrap_err();
        assert_eq!(syntax_line(e), 4);
    }

    #[test]
    fn serialize_round_trip_with_inline() {
        let d = standard_sphere(2, [1, 1, 0]).unwrap();
        let mut c = Certificate::from_moves(2, vec![Move::slide(Family::Alpha, 1, 2, IntPoly::linear(1, -3))]);
        c.steps[0].expect = Some(Expectation::Inline(d.clone().with_label("x # y")));
        c.footer = Some(Expectation::File("end.json".into()));
        c.source = Some("start.json".into());
        let text = c.serialize();
        assert_eq!(Certificate::parse(&text).unwrap(), c);
    }

    #[test]
    fn empty_certificate_with_footer() {
        let d = standard_sphere(2, [1, 1, 0]).unwrap();
        let mut c = Certificate::from_moves(2, vec![]);
        c.footer = Some(Expectation::Inline(d.clone()));
        let r = replay(&d, &c, ReplayOptions::default(), &|_| Err("none".into())).unwrap();
        assert_eq!(r.footer_passed, Some(true));
        assert!(r.assertions_passed());
        assert!(r.standard.is_some());
    }

    #[test]
    fn genus_mismatch() {
        let d = standard_sphere(2, [1, 1, 0]).unwrap();
        let c = Certificate::from_moves(3, vec![]);
        assert!(matches!(
            replay(&d, &c, ReplayOptions::default(), &|_| Err("none".into())),
            Err(CertError::Genus { .. })
        ));
    }

    #[test]
    fn strict_and_lax_modes() {
        let d = standard_sphere(2, [1, 1, 0]).unwrap();
        let mut c = Certificate::from_moves(
            2,
            vec![Move::slide(Family::Alpha, 1, 2, 1), Move::slide(Family::Alpha, 1, 2, -1)],
        );
        // both assertions wrong
        c.steps[0].expect = Some(Expectation::Inline(d.clone()));
        c.steps[1].expect = Some(Expectation::Inline(standard_sphere(2, [0, 1, 1]).unwrap()));
        let lax = replay(&d, &c, ReplayOptions::default(), &|_| Err("none".into())).unwrap();
        assert_eq!(lax.steps.iter().filter(|s| s.passed == Some(false)).count(), 2);
        assert_eq!(lax.first_failure().unwrap().step, 1);
        let strict = replay(&d, &c, ReplayOptions { strict: true, n: None }, &|_| Err("none".into())).unwrap();
        assert_eq!(strict.aborted_at, Some(1));
        assert_eq!(strict.steps.len(), 1);
    }

    #[test]
    fn missing_expect_file_is_an_error() {
        let d = standard_sphere(2, [1, 1, 0]).unwrap();
        let c = Certificate::parse("genus 2\nnegate f=alpha i=1\nexpect file=nowhere.json").unwrap();
        let r = replay(&d, &c, ReplayOptions::default(), &store_resolver(&DataStore::Embedded));
        assert!(matches!(r, Err(CertError::Expect { .. })));
    }
}
