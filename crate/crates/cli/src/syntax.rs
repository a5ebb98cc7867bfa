//! Term files: a small header, then named terms in prefix syntax.
//!
//! ```text
//! theory S
//! locs x y
//! var x : cede
//! term lhs = (acq (lkp y (rel x) (rel x)))
//! term rhs : cede = x
//! ```

use std::fmt;

use shared_state::kernel::{Op, Sort, Term, TermKind, VarContext};
use shared_state::presentations::{build, Theory};
use shared_state::store::{Locations, Store, Transition};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{pos}: {msg}")]
pub struct ParseError {
    pub pos: Pos,
    pub msg: String,
}

fn err<T>(pos: Pos, msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { pos, msg: msg.into() })
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Open,
    Close,
    Colon,
    Equals,
    Comma,
    Atom(String),
    Newline,
}

fn tokenize(src: &str) -> Result<Vec<(Tok, Pos)>, ParseError> {
    let mut out = Vec::new();
    let mut chars = src.chars().peekable();
    let (mut line, mut col) = (1, 1);
    while let Some(&c) = chars.peek() {
        let pos = Pos { line, col };
        let single = match c {
            '(' => Some(Tok::Open),
            ')' => Some(Tok::Close),
            ':' => Some(Tok::Colon),
            '=' => Some(Tok::Equals),
            ',' => Some(Tok::Comma),
            '\n' => Some(Tok::Newline),
            _ => None,
        };
        if let Some(t) = single {
            chars.next();
            out.push((t, pos));
            if c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            continue;
        }
        if c == '#' {
            while chars.peek().is_some_and(|&c| c != '\n') {
                chars.next();
            }
            continue;
        }
        if c.is_whitespace() {
            chars.next();
            col += 1;
            continue;
        }
        let mut atom = String::new();
        while let Some(&c) = chars.peek() {
            if c.is_whitespace() || "():=,#".contains(c) {
                break;
            }
            atom.push(c);
            chars.next();
            col += 1;
        }
        if atom.is_empty() {
            return err(pos, format!("unexpected character `{c}`"));
        }
        out.push((Tok::Atom(atom), pos));
    }
    Ok(out)
}

/// An expression before sorting.
#[derive(Debug, Clone, PartialEq, Eq)]
enum Sexp {
    Atom(String, Pos),
    List(Vec<Sexp>, Pos),
}

impl Sexp {
    fn pos(&self) -> Pos {
        match self {
            Sexp::Atom(_, p) | Sexp::List(_, p) => *p,
        }
    }
}

struct Cursor<'a> {
    toks: &'a [(Tok, Pos)],
    at: usize,
    end: Pos,
}

impl Cursor<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(t, _)| t)
    }

    fn pos(&self) -> Pos {
        self.toks.get(self.at).map(|(_, p)| *p).unwrap_or(self.end)
    }

    fn next(&mut self) -> Option<(Tok, Pos)> {
        let t = self.toks.get(self.at).cloned();
        self.at += 1;
        t
    }

    fn skip_newlines(&mut self) {
        while self.peek() == Some(&Tok::Newline) {
            self.at += 1;
        }
    }

    fn atom(&mut self, what: &str) -> Result<(String, Pos), ParseError> {
        match self.next() {
            Some((Tok::Atom(a), p)) => Ok((a, p)),
            Some((_, p)) => err(p, format!("expected {what}")),
            None => err(self.end, format!("expected {what}, found end of file")),
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        let pos = self.pos();
        match self.next() {
            Some((t, _)) if t == tok => Ok(()),
            _ => err(pos, format!("expected {what}")),
        }
    }

    fn end_of_statement(&mut self) -> Result<(), ParseError> {
        match self.peek() {
            None | Some(Tok::Newline) => Ok(()),
            _ => err(self.pos(), "expected end of line"),
        }
    }

    // Expressions may span lines inside parentheses.
    fn sexp(&mut self) -> Result<Sexp, ParseError> {
        let pos = self.pos();
        match self.next() {
            Some((Tok::Atom(a), p)) => Ok(Sexp::Atom(a, p)),
            Some((Tok::Open, p)) => {
                let mut items = Vec::new();
                loop {
                    self.skip_newlines();
                    match self.peek() {
                        Some(Tok::Close) => {
                            self.at += 1;
                            return Ok(Sexp::List(items, p));
                        }
                        None => return err(p, "unclosed `(`"),
                        _ => items.push(self.sexp()?),
                    }
                }
            }
            Some((Tok::Close, p)) => err(p, "unexpected `)`"),
            _ => err(pos, "expected an expression"),
        }
    }
}

/// A parsed term file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TermFile {
    pub theory: Theory,
    pub locs: Locations,
    /// Whether the file gave its own `locs` line.
    pub explicit_locs: bool,
    pub ctx: VarContext,
    pub terms: Vec<(String, Term)>,
}

impl TermFile {
    pub fn term(&self, name: &str) -> Option<&Term> {
        self.terms.iter().find(|(n, _)| n == name).map(|(_, t)| t)
    }
}

const KEYWORDS: [&str; 8] = ["bot", "or", "upd", "lkp", "acq", "rel", "tr", "="];

/// Parses a term file. Locations default to `default_locs` when the file has
/// no `locs` line.
pub fn parse_file(src: &str, default_locs: &Locations) -> Result<TermFile, ParseError> {
    let toks = tokenize(src)?;
    let last_line = src.lines().count().max(1);
    let mut cur = Cursor {
        toks: &toks,
        at: 0,
        end: Pos { line: last_line + 1, col: 1 },
    };
    let mut theory: Option<Theory> = None;
    let mut locs: Option<Locations> = None;
    let mut ctx = VarContext::new();
    let mut terms: Vec<(String, Term)> = Vec::new();
    let mut explicit_locs = false;
    loop {
        cur.skip_newlines();
        let Some((Tok::Atom(kw), pos)) = cur.next() else {
            if cur.at > toks.len() {
                break;
            }
            return err(toks[cur.at - 1].1, "expected `theory`, `locs`, `var` or `term`");
        };
        match kw.as_str() {
            "theory" => {
                if theory.is_some() {
                    return err(pos, "theory given twice");
                }
                let (name, p) = cur.atom("a theory name")?;
                theory = Some(name.parse().map_err(|e: shared_state::presentations::PresentationError| {
                    ParseError { pos: p, msg: e.to_string() }
                })?);
                cur.end_of_statement()?;
            }
            "locs" => {
                if locs.is_some() || !ctx.is_empty() || !terms.is_empty() {
                    return err(pos, "`locs` must come once, before variables and terms");
                }
                let mut names = Vec::new();
                while let Some(Tok::Atom(_)) = cur.peek() {
                    names.push(cur.atom("a location")?.0);
                    if cur.peek() == Some(&Tok::Comma) {
                        cur.at += 1;
                    }
                }
                locs = Some(Locations::new(names).map_err(|e| ParseError { pos, msg: e.to_string() })?);
                explicit_locs = true;
                cur.end_of_statement()?;
            }
            "var" => {
                let mut names = Vec::new();
                while let Some(Tok::Atom(_)) = cur.peek() {
                    names.push(cur.atom("a variable")?);
                    if cur.peek() == Some(&Tok::Comma) {
                        cur.at += 1;
                    }
                }
                if names.is_empty() {
                    return err(cur.pos(), "expected a variable");
                }
                cur.expect(Tok::Colon, "`:`")?;
                let (s, p) = cur.atom("a sort")?;
                let sort: Sort = s.parse().map_err(|m| ParseError { pos: p, msg: m })?;
                for (n, p) in names {
                    if KEYWORDS.contains(&n.as_str()) {
                        return err(p, format!("`{n}` is reserved"));
                    }
                    ctx.declare(n.as_str(), sort).map_err(|e| ParseError { pos: p, msg: e.to_string() })?;
                }
                cur.end_of_statement()?;
            }
            "term" => {
                let Some(th) = theory else {
                    return err(pos, "`theory` must come before terms");
                };
                let locs = locs.get_or_insert_with(|| default_locs.clone());
                let (name, p) = cur.atom("a term name")?;
                if terms.iter().any(|(n, _)| *n == name) {
                    return err(p, format!("term `{name}` defined twice"));
                }
                let mut expected = None;
                if cur.peek() == Some(&Tok::Colon) {
                    cur.at += 1;
                    let (s, p) = cur.atom("a sort")?;
                    expected = Some(s.parse().map_err(|m| ParseError { pos: p, msg: m })?);
                }
                cur.expect(Tok::Equals, "`=`")?;
                let body = cur.sexp()?;
                cur.end_of_statement()?;
                let elab = Elaborator { theory: th, locs, ctx: &ctx };
                let t = elab.term(&body, expected)?;
                build(th, locs)
                    .signature()
                    .check(&t)
                    .map_err(|e| ParseError { pos: body.pos(), msg: e.to_string() })?;
                terms.push((name, t));
            }
            other => return err(pos, format!("expected `theory`, `locs`, `var` or `term`, found `{other}`")),
        }
    }
    let Some(theory) = theory else {
        return err(Pos { line: 1, col: 1 }, "missing `theory` line");
    };
    Ok(TermFile {
        theory,
        locs: locs.unwrap_or_else(|| default_locs.clone()),
        explicit_locs,
        ctx,
        terms,
    })
}

/// Parses a single expression against a header.
pub fn parse_term(
    src: &str,
    theory: Theory,
    locs: &Locations,
    ctx: &VarContext,
    expected: Option<Sort>,
) -> Result<Term, ParseError> {
    let toks: Vec<(Tok, Pos)> = tokenize(src)?.into_iter().filter(|(t, _)| *t != Tok::Newline).collect();
    let mut cur = Cursor {
        toks: &toks,
        at: 0,
        end: Pos { line: 1, col: src.chars().count() + 1 },
    };
    let body = cur.sexp()?;
    if cur.peek().is_some() {
        return err(cur.pos(), "trailing input");
    }
    let t = Elaborator { theory, locs, ctx }.term(&body, expected)?;
    build(theory, locs)
        .signature()
        .check(&t)
        .map_err(|e| ParseError { pos: body.pos(), msg: e.to_string() })?;
    Ok(t)
}

struct Elaborator<'a> {
    theory: Theory,
    locs: &'a Locations,
    ctx: &'a VarContext,
}

impl Elaborator<'_> {
    fn sole_sort(&self) -> Option<Sort> {
        let sorts = self.theory.sorts();
        (sorts.len() == 1).then(|| sorts[0])
    }

    fn check(&self, pos: Pos, found: Sort, expected: Option<Sort>) -> Result<(), ParseError> {
        match expected {
            Some(e) if e != found => err(pos, format!("expected sort {}, found {}", e.keyword(), found.keyword())),
            _ => Ok(()),
        }
    }

    // The sort `e` would have on its own, if it fixes one.
    fn infer(&self, e: &Sexp) -> Option<Sort> {
        match e {
            Sexp::Atom(a, _) if a == "bot" => self.sole_sort(),
            Sexp::Atom(a, _) => self.ctx.get(a),
            Sexp::List(items, _) => match items.first() {
                Some(Sexp::Atom(h, _)) => match h.as_str() {
                    "upd" | "lkp" | "rel" => Some(Sort::Hold),
                    "acq" => Some(Sort::Cede),
                    "tr" => items.get(3).and_then(|t| self.infer(t)).or(self.sole_sort()).or(Some(Sort::Hold)),
                    "or" => items[1..].iter().find_map(|t| self.infer(t)).or(self.sole_sort()),
                    "bot" => self.sole_sort(),
                    _ => None,
                },
                _ => None,
            },
        }
    }

    fn loc(&self, e: &Sexp) -> Result<shared_state::store::Loc, ParseError> {
        match e {
            Sexp::Atom(a, p) => self.locs.lookup(a).map_err(|m| ParseError { pos: *p, msg: m.to_string() }),
            other => err(other.pos(), "expected a location"),
        }
    }

    fn store(&self, e: &Sexp) -> Result<Store, ParseError> {
        match e {
            Sexp::Atom(a, p) => self.locs.parse_store(a).map_err(|m| ParseError { pos: *p, msg: m.to_string() }),
            other => err(other.pos(), "expected a store"),
        }
    }

    fn arity(&self, items: &[Sexp], n: usize, pos: Pos, form: &str) -> Result<(), ParseError> {
        if items.len() != n + 1 {
            return err(pos, format!("`{form}` takes {n} argument(s), got {}", items.len() - 1));
        }
        Ok(())
    }

    fn term(&self, e: &Sexp, expected: Option<Sort>) -> Result<Term, ParseError> {
        match e {
            Sexp::Atom(a, p) if a == "bot" => {
                let Some(s) = expected.or(self.sole_sort()) else {
                    return err(*p, "cannot tell the sort of `bot` here; annotate the term");
                };
                Ok(Term::bot(s))
            }
            Sexp::Atom(a, p) => {
                if KEYWORDS.contains(&a.as_str()) {
                    return err(*p, format!("`{a}` needs arguments in parentheses"));
                }
                let Some(s) = self.ctx.get(a) else {
                    return err(*p, format!("undeclared variable `{a}`"));
                };
                self.check(*p, s, expected)?;
                Ok(Term::var(a.as_str(), s))
            }
            Sexp::List(items, p) => {
                let Some(Sexp::Atom(head, _)) = items.first() else {
                    return err(*p, "expected an operator after `(`");
                };
                let p = *p;
                match head.as_str() {
                    "bot" | "or" => {
                        let Some(s) = expected.or_else(|| self.infer(e)) else {
                            return err(p, format!("cannot tell the sort of `{head}` here; annotate the term"));
                        };
                        if head == "bot" && items.len() > 1 {
                            return err(p, "`bot` takes no arguments");
                        }
                        let args = items[1..]
                            .iter()
                            .map(|t| self.term(t, Some(s)))
                            .collect::<Result<Vec<_>, _>>()?;
                        Ok(Term::join(s, args).expect("arguments share the sort"))
                    }
                    "upd" => {
                        self.arity(items, 3, p, "upd")?;
                        self.check(p, Sort::Hold, expected)?;
                        let loc = self.loc(&items[1])?;
                        let bit = match &items[2] {
                            Sexp::Atom(b, bp) => {
                                Locations::parse_bit(b).map_err(|m| ParseError { pos: *bp, msg: m.to_string() })?
                            }
                            other => return err(other.pos(), "expected a bit"),
                        };
                        Ok(Term::update(loc, bit, self.term(&items[3], Some(Sort::Hold))?))
                    }
                    "lkp" => {
                        self.arity(items, 3, p, "lkp")?;
                        self.check(p, Sort::Hold, expected)?;
                        let loc = self.loc(&items[1])?;
                        let t0 = self.term(&items[2], Some(Sort::Hold))?;
                        let t1 = self.term(&items[3], Some(Sort::Hold))?;
                        Ok(Term::lookup(loc, t0, t1).expect("both hold"))
                    }
                    "acq" => {
                        self.arity(items, 1, p, "acq")?;
                        self.check(p, Sort::Cede, expected)?;
                        Ok(Term::acquire(self.term(&items[1], Some(Sort::Hold))?).expect("hold"))
                    }
                    "rel" => {
                        self.arity(items, 1, p, "rel")?;
                        self.check(p, Sort::Hold, expected)?;
                        Ok(Term::release(self.term(&items[1], Some(Sort::Cede))?).expect("cede"))
                    }
                    "tr" => {
                        self.arity(items, 3, p, "tr")?;
                        let from = self.store(&items[1])?;
                        let to = self.store(&items[2])?;
                        let s = expected.or_else(|| self.infer(e)).unwrap_or(Sort::Hold);
                        let body = self.term(&items[3], Some(s))?;
                        Ok(Term::transition(Transition::new(from, to), body))
                    }
                    other => err(p, format!("unknown operator `{other}`")),
                }
            }
        }
    }
}

/// Prints a term in the syntax [`parse_term`] reads.
pub fn print_term(t: &Term, locs: &Locations) -> String {
    let mut out = String::new();
    print_into(t, locs, &mut out);
    out
}

fn print_into(t: &Term, locs: &Locations, out: &mut String) {
    let TermKind::App(op, args) = t.kind() else {
        out.push_str(t.as_var().expect("variable"));
        return;
    };
    let head = match *op {
        Op::Join(0) => {
            out.push_str("bot");
            return;
        }
        Op::Join(_) => "or".to_string(),
        Op::Update { loc, bit } => format!("upd {} {}", locs.name(loc), u8::from(bit)),
        Op::Lookup { loc } => format!("lkp {}", locs.name(loc)),
        Op::Acquire => "acq".to_string(),
        Op::Release => "rel".to_string(),
        Op::Transition(tr) => format!("tr {} {}", locs.render(tr.from), locs.render(tr.to)),
    };
    out.push('(');
    out.push_str(&head);
    for a in args {
        out.push(' ');
        print_into(a, locs, out);
    }
    out.push(')');
}

#[cfg(test)]
mod tests {
    use super::*;

    fn header(theory: &str, vars: &str) -> String {
        format!("theory {theory}\n{vars}\n")
    }

    #[test]
    fn irrelevant_read_image() {
        let src = header("S", "var x : cede") + "term t = (acq (lkp y (rel x) (rel x)))\n";
        let f = parse_file(&src, &Locations::default()).unwrap();
        assert_eq!(f.term("t").unwrap().show(&f.locs).to_string(), "◁L_y(▷x, ▷x)");
    }

    #[test]
    fn bot_and_transitions() {
        let src = header("S", "var x : cede") + "term b : cede = bot\nterm c = (or)\n";
        let f = parse_file(&src, &Locations::default());
        assert!(f.is_err(), "`(or)` has no inferable sort in S");
        let src = header("S", "var x : cede") + "term b : cede = bot\n";
        let f = parse_file(&src, &Locations::default()).unwrap();
        assert_eq!(f.term("b").unwrap(), &Term::bot(Sort::Cede));
        let src = header("B", "var x : star") + "term t = (tr 11 10 x)\n";
        let f = parse_file(&src, &Locations::default()).unwrap();
        assert_eq!(f.term("t").unwrap().show(&f.locs).to_string(), "⟨11,10⟩x");
    }

    #[test]
    fn errors_carry_positions() {
        let src = "theory S\nvar x : cede\nterm t = (acq (lkp z (rel x) (rel x)))\n";
        let e = parse_file(src, &Locations::default()).unwrap_err();
        assert_eq!(e.pos, Pos { line: 3, col: 20 });
        let e = parse_file("theory S\nvar x : hold\nterm t : cede = x\n", &Locations::default()).unwrap_err();
        assert_eq!(e.pos.line, 3);
        let e = parse_file("theory S\nterm t = (acq\n", &Locations::default()).unwrap_err();
        assert!(e.msg.contains("unclosed"));
        assert!(parse_file("locs x\n", &Locations::default()).is_err());
    }

    #[test]
    fn print_parse_round_trip() {
        let src = header("S", "var 3 : hold\nvar 7 : cede")
            + "term t = (upd y 0 (rel (acq (lkp y 3 (upd x 1 (upd y 1 (rel 7)))))))\n";
        let f = parse_file(&src, &Locations::default()).unwrap();
        let t = f.term("t").unwrap();
        assert_eq!(t.show(&f.locs).to_string(), "U_{y,0}▷◁L_y(3, U_{x,1}U_{y,1}▷7)");
        let printed = print_term(t, &f.locs);
        assert_eq!(&parse_term(&printed, f.theory, &f.locs, &f.ctx, None).unwrap(), t);
    }
}
