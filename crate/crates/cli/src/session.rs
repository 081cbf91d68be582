//! Session files: a ring header, named definitions and a command list,
//! separated by `;`. Comments run from `#` to the end of the line.
//!
//! Parsing resolves every name and parses every polynomial, so syntax
//! errors, undefined names and ring mismatches are reported with line and
//! column before any computation starts.

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Arc;

use hilbloc::hilb::AffineSpace;
use hilbloc::poly::parse_poly_at;
use hilbloc::{Error, FactoredFraction, Ideal, Polynomial, Result, Ring};

/// The ring in force at a statement, with its relations and the sections
/// declared so far by `invert`.
#[derive(Clone, Debug)]
pub struct Scope {
    pub id: usize,
    pub ring: Ring,
    pub relations: Vec<Polynomial>,
    pub collection: Vec<InvertSpec>,
}

#[derive(Clone, Debug)]
pub struct InvertSpec {
    pub label: String,
    pub section: Polynomial,
    /// Fractional ideal `(gens) / denominator`; `None` for the free module.
    pub module: Option<(Vec<Polynomial>, Polynomial)>,
}

#[derive(Clone, Debug)]
pub struct MapSpec {
    pub name: String,
    pub target_ring: Ring,
    pub target_relations: Vec<Polynomial>,
    pub images: Vec<Polynomial>,
}

#[derive(Clone, Debug)]
pub enum AlgebraSpec {
    Quotient {
        ideal: Ideal,
        fiber: Vec<String>,
    },
    Monic {
        var: String,
        coeffs: Vec<Polynomial>,
    },
    Table {
        labels: Vec<String>,
        unit: Vec<Polynomial>,
        structure: Vec<Vec<Vec<Polynomial>>>,
    },
}

#[derive(Clone, Debug)]
pub struct AlgebraDef {
    pub name: String,
    pub spec: AlgebraSpec,
}

#[derive(Clone, Debug)]
pub enum SectionSpec {
    /// A polynomial of the algebra's ambient ring.
    Poly(Polynomial),
    /// Coordinates over the base, one per basis element.
    Coords(Vec<Polynomial>),
}

/// `p / s^a t^b` with labels resolved to collection indices.
#[derive(Clone, Debug)]
pub struct FracSpec {
    pub numerator: Polynomial,
    pub exponent: Vec<(usize, u32)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Theorem {
    /// Points of the localized Hilbert scheme counted by ideals and by norms.
    Localized,
    /// The localized scheme is the open subscheme cut out by the norms.
    Open,
    /// Points over the local ring at the origin.
    Stalk,
}

impl Theorem {
    pub fn number(self) -> &'static str {
        match self {
            Theorem::Localized => "5.5",
            Theorem::Open => "5.6",
            Theorem::Stalk => "5.7",
        }
    }
}

#[derive(Clone, Debug)]
pub enum CommandKind {
    Gb(Ideal),
    Nf(Ideal, Polynomial),
    Saturate(Ideal, Polynomial),
    Eliminate(Ideal, Vec<usize>),
    Colength(Ideal),
    FracEq(FracSpec, FracSpec),
    FracFactor(Arc<MapSpec>),
    FracContract(Vec<FracSpec>),
    NormDet(Arc<AlgebraDef>, SectionSpec),
    NormSigma(Arc<AlgebraDef>, Vec<SectionSpec>, Arc<MapSpec>),
    NormCheckFree(Vec<Vec<Polynomial>>, usize),
    HilbUniversal {
        n: usize,
    },
    HilbNorm {
        n: usize,
        f: Polynomial,
    },
    HilbEnumerate {
        n: usize,
        space: AffineSpace,
        sections: Vec<Polynomial>,
        list: bool,
    },
    HilbVerify {
        theorem: Theorem,
        n: usize,
        sections: Vec<Polynomial>,
    },
    Counterexample {
        f: Polynomial,
        samples: Vec<FactoredFraction>,
        source: String,
    },
    SelfCheck {
        cases: usize,
    },
}

#[derive(Clone, Debug)]
pub struct Command {
    /// 1-based position among the commands of the session.
    pub index: usize,
    /// The statement text with whitespace collapsed.
    pub echo: String,
    pub scope: Option<Arc<Scope>>,
    pub kind: CommandKind,
}

#[derive(Clone, Debug, Default)]
pub struct SessionFile {
    pub commands: Vec<Command>,
}

/// Parses a session. Relative sample-file paths resolve against `base_dir`.
pub fn parse_session(text: &str, base_dir: &Path) -> Result<SessionFile> {
    let cleaned = strip_comments(text);
    let mut parser = Parser {
        loc: Locator::new(text),
        base_dir: base_dir.to_path_buf(),
        scope: None,
        next_scope: 0,
        names: HashMap::new(),
        commands: Vec::new(),
    };
    let mut start = 0;
    for (i, c) in cleaned
        .char_indices()
        .chain(std::iter::once((cleaned.len(), ';')))
    {
        if c == ';' {
            let stmt = Piece {
                text: &cleaned[start..i],
                at: start,
            }
            .trim();
            if !stmt.text.is_empty() {
                parser.statement(stmt)?;
            }
            start = i + 1;
        }
    }
    Ok(SessionFile {
        commands: parser.commands,
    })
}

/// Blanks out comments, keeping byte offsets intact.
fn strip_comments(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut in_comment = false;
    for c in text.chars() {
        if c == '#' {
            in_comment = true;
        } else if c == '\n' {
            in_comment = false;
        }
        if in_comment {
            out.extend(std::iter::repeat_n(' ', c.len_utf8()));
        } else {
            out.push(c);
        }
    }
    out
}

struct Locator {
    line_starts: Vec<usize>,
    text: String,
}

impl Locator {
    fn new(text: &str) -> Locator {
        let mut line_starts = vec![0];
        line_starts.extend(text.match_indices('\n').map(|(i, _)| i + 1));
        Locator {
            line_starts,
            text: text.to_string(),
        }
    }

    fn position(&self, offset: usize) -> (usize, usize) {
        let line = self.line_starts.partition_point(|&s| s <= offset) - 1;
        let column = self.text[self.line_starts[line]..offset].chars().count() + 1;
        (line + 1, column)
    }
}

/// A slice of the session text with its byte offset in the file.
#[derive(Clone, Copy, Debug)]
struct Piece<'a> {
    text: &'a str,
    at: usize,
}

impl<'a> Piece<'a> {
    fn trim(self) -> Piece<'a> {
        let lead = self.text.len() - self.text.trim_start().len();
        Piece {
            text: self.text.trim(),
            at: self.at + lead,
        }
    }

    fn slice(self, from: usize, to: usize) -> Piece<'a> {
        Piece {
            text: &self.text[from..to],
            at: self.at + from,
        }
    }

    fn tail(self, from: usize) -> Piece<'a> {
        self.slice(from, self.text.len())
    }

    /// The first word and the trimmed remainder.
    fn split_word(self) -> (Piece<'a>, Piece<'a>) {
        let t = self.trim();
        match t.text.find(char::is_whitespace) {
            Some(i) => (t.slice(0, i), t.tail(i).trim()),
            None => (t, t.tail(t.text.len())),
        }
    }

    /// Byte offsets at bracket depth zero, paired with their characters.
    fn top_level(self) -> Vec<(usize, char)> {
        let mut depth = 0i32;
        let mut out = Vec::new();
        for (i, c) in self.text.char_indices() {
            match c {
                '(' | '[' => depth += 1,
                ')' | ']' => depth -= 1,
                _ if depth == 0 => out.push((i, c)),
                _ => {}
            }
        }
        out
    }

    /// Splits at top-level occurrences of `sep`; an empty input gives no parts.
    fn split_top(self, sep: char) -> Vec<Piece<'a>> {
        if self.text.trim().is_empty() {
            return Vec::new();
        }
        let mut parts = Vec::new();
        let mut start = 0;
        for (i, c) in self.top_level() {
            if c == sep {
                parts.push(self.slice(start, i).trim());
                start = i + c.len_utf8();
            }
        }
        parts.push(self.tail(start).trim());
        parts
    }

    /// First top-level occurrence of `word` delimited by whitespace or brackets.
    fn find_word(self, word: &str) -> Option<usize> {
        let bytes = self.text.as_bytes();
        self.top_level().into_iter().map(|(i, _)| i).find(|&i| {
            self.text[i..].starts_with(word)
                && (i == 0 || !is_ident_byte(bytes[i - 1]))
                && bytes.get(i + word.len()).is_none_or(|&b| !is_ident_byte(b))
        })
    }

    /// `(inner)` spanning the whole piece.
    fn parenthesized(self) -> Option<Piece<'a>> {
        let t = self.trim();
        if !(t.text.starts_with('(') && t.text.ends_with(')')) {
            return None;
        }
        // the opening parenthesis must close at the very end
        let mut depth = 0;
        for (i, c) in t.text.char_indices() {
            match c {
                '(' | '[' => depth += 1,
                ')' | ']' => {
                    depth -= 1;
                    if depth == 0 && i + 1 != t.text.len() {
                        return None;
                    }
                }
                _ => {}
            }
        }
        Some(t.slice(1, t.text.len() - 1))
    }

    /// A leading balanced `(...)` group and the remainder.
    fn leading_group(self) -> Option<(Piece<'a>, Piece<'a>)> {
        let t = self.trim();
        if !t.text.starts_with('(') {
            return None;
        }
        let mut depth = 0;
        for (i, c) in t.text.char_indices() {
            match c {
                '(' | '[' => depth += 1,
                ')' | ']' => {
                    depth -= 1;
                    if depth == 0 {
                        return Some((t.slice(1, i), t.tail(i + 1).trim()));
                    }
                }
                _ => {}
            }
        }
        None
    }
}

fn is_ident_byte(b: u8) -> bool {
    b.is_ascii_alphanumeric() || b == b'_'
}

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    chars
        .next()
        .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

#[derive(Clone, Debug)]
enum Named {
    Poly(Polynomial),
    Ideal(Ideal),
    Map(Arc<MapSpec>),
    Algebra(Arc<AlgebraDef>),
    Label,
}

impl Named {
    fn kind(&self) -> &'static str {
        match self {
            Named::Poly(_) => "polynomial",
            Named::Ideal(_) => "ideal",
            Named::Map(_) => "map",
            Named::Algebra(_) => "algebra",
            Named::Label => "section label",
        }
    }
}

struct Parser {
    loc: Locator,
    base_dir: PathBuf,
    scope: Option<Scope>,
    next_scope: usize,
    /// Each name with the scope it was defined in.
    names: HashMap<String, (usize, String, Named)>,
    commands: Vec<Command>,
}

impl Parser {
    fn err(&self, p: Piece, message: impl Into<String>) -> Error {
        let (line, column) = self.loc.position(p.at);
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }

    /// Attaches the position of `p` to errors that do not carry one.
    fn at<T>(&self, p: Piece, r: Result<T>) -> Result<T> {
        r.map_err(|e| match e {
            Error::Parse { .. } => e,
            Error::Usage(m) => self.err(p, m),
            other => self.err(p, other.to_string()),
        })
    }

    fn position(&self, p: Piece) -> (usize, usize) {
        self.loc.position(p.at)
    }

    fn scope(&self, p: Piece) -> Result<&Scope> {
        self.scope
            .as_ref()
            .ok_or_else(|| self.err(p, "no ring declared; start the session with `ring ...`"))
    }

    fn poly_in(&self, ring: &Ring, p: Piece) -> Result<Polynomial> {
        let p = p.trim();
        if is_ident(p.text) && ring.var_index(p.text).is_none() {
            if let Some(Named::Poly(f)) = self.lookup(p, &["polynomial"]).ok().map(|(_, n)| n) {
                return Ok(f);
            }
        }
        let (line, column) = self.position(p);
        parse_poly_at(ring, p.text, line, column)
    }

    fn poly(&self, p: Piece) -> Result<Polynomial> {
        let ring = self.scope(p)?.ring.clone();
        self.poly_in(&ring, p)
    }

    fn poly_list_in(&self, ring: &Ring, p: Piece) -> Result<Vec<Polynomial>> {
        p.split_top(',')
            .into_iter()
            .map(|q| self.poly_in(ring, q))
            .collect()
    }

    fn parenthesized<'a>(&self, p: Piece<'a>, what: &str) -> Result<Piece<'a>> {
        p.parenthesized()
            .ok_or_else(|| self.err(p, format!("expected {what} in parentheses")))
    }

    /// Looks a name up, checking its kind and that it belongs to the current ring.
    fn lookup(&self, p: Piece, kinds: &[&str]) -> Result<(usize, Named)> {
        let (scope_id, ring_text, named) = self
            .names
            .get(p.text)
            .ok_or_else(|| self.err(p, format!("undefined name `{}`", p.text)))?;
        if !kinds.contains(&named.kind()) {
            return Err(self.err(
                p,
                format!(
                    "`{}` is a {}, expected {}",
                    p.text,
                    named.kind(),
                    kinds.join(" or ")
                ),
            ));
        }
        let current = self.scope(p)?;
        if *scope_id != current.id && !matches!(named, Named::Label) {
            let now = scope_text(current);
            if *ring_text != now {
                return Err(self.err(
                    p,
                    format!(
                        "ring mismatch: `{}` was defined over {ring_text}, current ring is {now}",
                        p.text
                    ),
                ));
            }
        }
        Ok((*scope_id, named.clone()))
    }

    fn define(&mut self, p: Piece, named: Named) -> Result<()> {
        if !is_ident(p.text) {
            return Err(self.err(p, format!("invalid name `{}`", p.text)));
        }
        let scope = self.scope(p)?;
        // section labels belong to the collection of one ring
        let stale_label =
            matches!(self.names.get(p.text), Some((id, _, Named::Label)) if *id != scope.id);
        if self.names.contains_key(p.text) && !stale_label {
            return Err(self.err(p, format!("name `{}` is already defined", p.text)));
        }
        if scope.ring.var_index(p.text).is_some() {
            return Err(self.err(p, format!("name `{}` shadows a ring variable", p.text)));
        }
        let entry = (scope.id, scope_text(scope), named);
        self.names.insert(p.text.to_string(), entry);
        Ok(())
    }

    /// `NAME = rest`
    fn binding<'a>(&self, p: Piece<'a>) -> Result<(Piece<'a>, Piece<'a>)> {
        let eq = p
            .text
            .find('=')
            .ok_or_else(|| self.err(p, "expected `NAME = ...`"))?;
        Ok((p.slice(0, eq).trim(), p.tail(eq + 1).trim()))
    }

    fn statement(&mut self, stmt: Piece) -> Result<()> {
        let (head, rest) = stmt.split_word();
        match head.text {
            "ring" => self.ring_stmt(rest),
            "poly" => {
                let (name, body) = self.binding(rest)?;
                let f = self.poly(body)?;
                self.define(name, Named::Poly(f))
            }
            "ideal" => {
                let (name, body) = self.binding(rest)?;
                let ideal = self.ideal(body)?;
                self.define(name, Named::Ideal(ideal))
            }
            "invert" => self.invert_stmt(rest),
            "map" => self.map_stmt(rest),
            "algebra" => self.algebra_stmt(rest),
            _ => self.command(stmt, head, rest),
        }
    }

    fn ring_spec(&self, p: Piece) -> Result<(Ring, Vec<Polynomial>)> {
        let close = p
            .text
            .find(']')
            .ok_or_else(|| self.err(p, "expected a ring such as `Q[x,y]` or `F3[x]`"))?;
        let ring_piece = p.slice(0, close + 1);
        let ring = self.at(ring_piece, Ring::from_str(ring_piece.text))?;
        let rest = p.tail(close + 1).trim();
        if rest.text.is_empty() {
            return Ok((ring, Vec::new()));
        }
        let Some(rels) = rest.text.strip_prefix('/') else {
            return Err(self.err(rest, "expected `/ (relations)` after the ring"));
        };
        let rels = rest.slice(rest.text.len() - rels.len(), rest.text.len());
        let inner = self.parenthesized(rels, "relations")?;
        Ok((ring.clone(), self.poly_list_in(&ring, inner)?))
    }

    fn ring_stmt(&mut self, rest: Piece) -> Result<()> {
        let (ring, relations) = self.ring_spec(rest)?;
        self.next_scope += 1;
        self.scope = Some(Scope {
            id: self.next_scope,
            ring,
            relations,
            collection: Vec::new(),
        });
        Ok(())
    }

    /// An ideal name or a parenthesized generator list; relations of the
    /// current ring are included.
    fn ideal(&self, p: Piece) -> Result<Ideal> {
        let p = p.trim();
        if is_ident(p.text) {
            return match self.lookup(p, &["ideal"])? {
                (_, Named::Ideal(i)) => Ok(i),
                _ => unreachable!("kind checked"),
            };
        }
        let inner = self.parenthesized(p, "an ideal name or generators")?;
        let scope = self.scope(p)?;
        let mut gens = self.poly_list_in(&scope.ring, inner)?;
        gens.extend(scope.relations.iter().cloned());
        self.at(p, Ideal::new(&scope.ring, gens))
    }

    /// `invert <section> <label> [module: g1, ..., gk / d]`
    fn invert_stmt(&mut self, rest: Piece) -> Result<()> {
        let (head, module) = match rest.find_word("module") {
            Some(i) => {
                let after = rest.tail(i + "module".len()).trim();
                let Some(body) = after.text.strip_prefix(':') else {
                    return Err(self.err(after, "expected `module:`"));
                };
                (
                    rest.slice(0, i).trim(),
                    Some(after.tail(after.text.len() - body.len()).trim()),
                )
            }
            None => (rest, None),
        };
        let split = head
            .text
            .rfind(char::is_whitespace)
            .ok_or_else(|| self.err(head, "expected `invert <section> <label>`"))?;
        let section_piece = head.slice(0, split).trim();
        let label = head.tail(split).trim();
        let ring = self.scope(rest)?.ring.clone();
        let section = self.poly_in(&ring, section_piece)?;
        let module = match module {
            None => None,
            Some(body) => {
                let slash = body
                    .top_level()
                    .into_iter()
                    .filter(|&(_, c)| c == '/')
                    .map(|(i, _)| i)
                    .next_back()
                    .ok_or_else(|| self.err(body, "expected `module: gens / denominator`"))?;
                let gens = self.poly_list_in(&ring, body.slice(0, slash))?;
                let denom = self.poly_in(&ring, body.tail(slash + 1))?;
                if gens.is_empty() {
                    return Err(self.err(body, "module needs at least one generator"));
                }
                Some((gens, denom))
            }
        };
        self.define(label, Named::Label)?;
        let spec = InvertSpec {
            label: label.text.to_string(),
            section,
            module,
        };
        self.scope.as_mut().expect("checked").collection.push(spec);
        Ok(())
    }

    /// `map NAME = (images) into <ring> [/ (relations)]`
    fn map_stmt(&mut self, rest: Piece) -> Result<()> {
        let (name, body) = self.binding(rest)?;
        let (images, after) = body
            .leading_group()
            .ok_or_else(|| self.err(body, "expected `(images) into <ring>`"))?;
        let (kw, target) = after.split_word();
        if kw.text != "into" {
            return Err(self.err(kw, "expected `into <ring>`"));
        }
        let (target_ring, target_relations) = self.ring_spec(target)?;
        let images = self.poly_list_in(&target_ring, images)?;
        let nvars = self.scope(rest)?.ring.nvars();
        if images.len() != nvars {
            return Err(self.err(
                body,
                format!(
                    "map needs {nvars} images, one per variable, got {}",
                    images.len()
                ),
            ));
        }
        let spec = MapSpec {
            name: name.text.to_string(),
            target_ring,
            target_relations,
            images,
        };
        self.define(name, Named::Map(Arc::new(spec)))
    }

    fn algebra_stmt(&mut self, rest: Piece) -> Result<()> {
        let (name, body) = self.binding(rest)?;
        let (kind, args) = body.split_word();
        let scope = self.scope(body)?.clone();
        let spec = match kind.text {
            "quotient" => {
                let at = args
                    .find_word("fiber")
                    .ok_or_else(|| self.err(args, "expected `quotient <ideal> fiber <vars>`"))?;
                let ideal = self.ideal(args.slice(0, at))?;
                let vars = args.tail(at + "fiber".len()).split_top(',');
                let mut fiber = Vec::new();
                for v in vars {
                    if scope.ring.var_index(v.text).is_none() {
                        return Err(self.err(
                            v,
                            format!("`{}` is not a variable of {}", v.text, scope.ring),
                        ));
                    }
                    fiber.push(v.text.to_string());
                }
                if fiber.is_empty() {
                    return Err(self.err(args, "fiber needs at least one variable"));
                }
                AlgebraSpec::Quotient { ideal, fiber }
            }
            "monic" => {
                let (var, coeffs) = args.split_word();
                if !is_ident(var.text) || scope.ring.var_index(var.text).is_some() {
                    return Err(self.err(var, "expected a fresh variable name"));
                }
                let inner = self.parenthesized(coeffs, "coefficients c0, ..., c_{n-1}")?;
                AlgebraSpec::Monic {
                    var: var.text.to_string(),
                    coeffs: self.poly_list_in(&scope.ring, inner)?,
                }
            }
            "table" => self.table_spec(&scope, args)?,
            _ => return Err(self.err(kind, "expected `quotient`, `monic` or `table`")),
        };
        let def = AlgebraDef {
            name: name.text.to_string(),
            spec,
        };
        self.define(name, Named::Algebra(Arc::new(def)))
    }

    /// `table (labels) unit (coords) products (row_1), ..., (row_n)` where row `i`
    /// lists the coordinate vectors of `b_i * b_j`.
    fn table_spec(&self, scope: &Scope, args: Piece) -> Result<AlgebraSpec> {
        let unit_at = args
            .find_word("unit")
            .ok_or_else(|| self.err(args, "expected `unit (...)`"))?;
        let prod_at = args
            .find_word("products")
            .ok_or_else(|| self.err(args, "expected `products ...`"))?;
        if prod_at < unit_at {
            return Err(self.err(args, "`unit` must come before `products`"));
        }
        let labels_piece = self.parenthesized(args.slice(0, unit_at), "basis labels")?;
        let labels: Vec<String> = labels_piece
            .split_top(',')
            .iter()
            .map(|l| l.text.to_string())
            .collect();
        let unit_piece = self.parenthesized(
            args.slice(unit_at + "unit".len(), prod_at),
            "unit coordinates",
        )?;
        let unit = self.poly_list_in(&scope.ring, unit_piece)?;
        let mut structure = Vec::new();
        for row in args.tail(prod_at + "products".len()).split_top(',') {
            let row_inner = self.parenthesized(row, "a row of products")?;
            let mut entries = Vec::new();
            for cell in row_inner.split_top(',') {
                entries.push(self.poly_list_in(
                    &scope.ring,
                    self.parenthesized(cell, "product coordinates")?,
                )?);
            }
            structure.push(entries);
        }
        Ok(AlgebraSpec::Table {
            labels,
            unit,
            structure,
        })
    }

    fn push(&mut self, stmt: Piece, kind: CommandKind) {
        let index = self.commands.len() + 1;
        let echo = stmt.text.split_whitespace().collect::<Vec<_>>().join(" ");
        let scope = self.scope.clone().map(Arc::new);
        self.commands.push(Command {
            index,
            echo,
            scope,
            kind,
        });
    }

    fn command(&mut self, stmt: Piece, head: Piece, rest: Piece) -> Result<()> {
        let kind = match head.text {
            "gb" => CommandKind::Gb(self.ideal(rest)?),
            "colength" => CommandKind::Colength(self.ideal(rest)?),
            "nf" | "saturate" => {
                let (ideal, f) = self.ideal_then(rest)?;
                let f = self.poly(f)?;
                if head.text == "nf" {
                    CommandKind::Nf(ideal, f)
                } else {
                    CommandKind::Saturate(ideal, f)
                }
            }
            "eliminate" => {
                let (ideal, vars) = self.ideal_then(rest)?;
                let ring = self.scope(rest)?.ring.clone();
                let mut block = Vec::new();
                for v in vars.split_top(',') {
                    let i = ring.var_index(v.text).ok_or_else(|| {
                        self.err(v, format!("`{}` is not a variable of {ring}", v.text))
                    })?;
                    block.push(i);
                }
                if block.is_empty() {
                    return Err(self.err(vars, "expected variables to eliminate"));
                }
                CommandKind::Eliminate(ideal, block)
            }
            "frac" => self.frac_command(rest)?,
            "norm" => self.norm_command(rest)?,
            "hilb" => self.hilb_command(rest)?,
            "counterexample" => self.counterexample_command(rest)?,
            "selfcheck" => {
                let flags = self.flags(rest, &[("cases", true)])?;
                let cases = flags
                    .get("cases")
                    .map(|p| self.number(*p))
                    .transpose()?
                    .unwrap_or(8);
                self.scope(rest)?;
                CommandKind::SelfCheck { cases }
            }
            _ => return Err(self.err(head, format!("unknown statement `{}`", head.text))),
        };
        self.push(stmt, kind);
        Ok(())
    }

    /// An ideal argument followed by more text.
    fn ideal_then<'a>(&self, p: Piece<'a>) -> Result<(Ideal, Piece<'a>)> {
        let p = p.trim();
        if let Some((_, rest)) = p.leading_group() {
            let group = p.slice(0, p.text.len() - rest.text.len()).trim();
            return Ok((self.ideal(group)?, rest));
        }
        let (name, rest) = p.split_word();
        Ok((self.ideal(name)?, rest))
    }

    fn number(&self, p: Piece) -> Result<usize> {
        p.text
            .trim()
            .parse()
            .map_err(|_| self.err(p, format!("expected a number, got `{}`", p.text)))
    }

    /// `--name value` pairs. Flags marked `false` take no value.
    fn flags<'a>(
        &self,
        p: Piece<'a>,
        allowed: &[(&'static str, bool)],
    ) -> Result<HashMap<&'static str, Piece<'a>>> {
        let mut out = HashMap::new();
        let starts: Vec<usize> = p
            .text
            .match_indices("--")
            .map(|(i, _)| i)
            .filter(|&i| i == 0 || p.text[..i].ends_with(char::is_whitespace))
            .collect();
        if let Some(first) = starts.first().copied().or(Some(p.text.len())) {
            let lead = p.slice(0, first).trim();
            if !lead.text.is_empty() {
                return Err(self.err(
                    lead,
                    format!("unexpected `{}`; options start with `--`", lead.text),
                ));
            }
        }
        for (k, &s) in starts.iter().enumerate() {
            let end = starts.get(k + 1).copied().unwrap_or(p.text.len());
            let (name, value) = p.slice(s + 2, end).split_word();
            let Some(&(flag, takes_value)) = allowed.iter().find(|(f, _)| *f == name.text) else {
                return Err(self.err(name, format!("unknown option `--{}`", name.text)));
            };
            if takes_value && value.text.is_empty() {
                return Err(self.err(name, format!("option `--{flag}` needs a value")));
            }
            if !takes_value && !value.text.is_empty() {
                return Err(self.err(value, format!("option `--{flag}` takes no value")));
            }
            if out.insert(flag, value).is_some() {
                return Err(self.err(name, format!("option `--{flag}` given twice")));
            }
        }
        Ok(out)
    }

    /// `p / [s^2 t]`, or a bare numerator.
    fn frac_spec(&self, p: Piece) -> Result<FracSpec> {
        let p = p.trim();
        let scope = self.scope(p)?;
        let Some(open) = p.text.find('[') else {
            return Ok(FracSpec {
                numerator: self.poly(p)?,
                exponent: Vec::new(),
            });
        };
        let head = p.slice(0, open).trim();
        let Some(num) = head.text.strip_suffix('/') else {
            return Err(self.err(p.tail(open), "expected `numerator / [labels]`"));
        };
        let numerator = self.poly(head.slice(0, num.len()))?;
        let close = p
            .text
            .rfind(']')
            .filter(|&c| c > open)
            .ok_or_else(|| self.err(p.tail(open), "unclosed `[`"))?;
        if !p.text[close + 1..].trim().is_empty() {
            return Err(self.err(p.tail(close + 1), "unexpected text after `]`"));
        }
        let mut exponent: Vec<(usize, u32)> = Vec::new();
        for word in p.slice(open + 1, close).text.split_whitespace() {
            let offset = word.as_ptr() as usize - p.text.as_ptr() as usize;
            let wp = p.slice(offset, offset + word.len());
            let (label, k) = match word.split_once('^') {
                Some((l, k)) => (
                    l,
                    k.parse::<u32>()
                        .map_err(|_| self.err(wp, format!("bad exponent in `{word}`")))?,
                ),
                None => (word, 1),
            };
            let index = scope
                .collection
                .iter()
                .position(|s| s.label == label)
                .ok_or_else(|| {
                    self.err(
                        wp,
                        format!("`{label}` is not an inverted section in the current ring"),
                    )
                })?;
            match exponent.iter_mut().find(|(i, _)| *i == index) {
                Some(e) => e.1 += k,
                None => exponent.push((index, k)),
            }
        }
        Ok(FracSpec {
            numerator,
            exponent,
        })
    }

    fn frac_command(&self, rest: Piece) -> Result<CommandKind> {
        let (sub, args) = rest.split_word();
        match sub.text {
            "eq" => {
                let at = args
                    .text
                    .find("==")
                    .ok_or_else(|| self.err(args, "expected `frac eq <a> == <b>`"))?;
                Ok(CommandKind::FracEq(
                    self.frac_spec(args.slice(0, at))?,
                    self.frac_spec(args.tail(at + 2))?,
                ))
            }
            "factor" => match self.lookup(args, &["map"])? {
                (_, Named::Map(m)) => Ok(CommandKind::FracFactor(m)),
                _ => unreachable!("kind checked"),
            },
            "contract" => {
                let gens = args
                    .split_top(',')
                    .into_iter()
                    .map(|g| self.frac_spec(g))
                    .collect::<Result<Vec<_>>>()?;
                Ok(CommandKind::FracContract(gens))
            }
            _ => Err(self.err(sub, "expected `frac eq`, `frac factor` or `frac contract`")),
        }
    }

    fn algebra(&self, p: Piece) -> Result<Arc<AlgebraDef>> {
        match self.lookup(p.trim(), &["algebra"])? {
            (_, Named::Algebra(a)) => Ok(a),
            _ => unreachable!("kind checked"),
        }
    }

    fn section_spec(&self, alg: &AlgebraDef, p: Piece) -> Result<SectionSpec> {
        let p = p.trim();
        let scope = self.scope(p)?;
        if let Some(inner) = p.text.strip_prefix('[').and_then(|t| t.strip_suffix(']')) {
            let inner = p.slice(1, 1 + inner.len());
            let base = base_ring_of(scope, alg);
            return Ok(SectionSpec::Coords(self.poly_list_in(&base, inner)?));
        }
        let ambient = match &alg.spec {
            AlgebraSpec::Quotient { .. } => scope.ring.clone(),
            AlgebraSpec::Monic { var, .. } => scope.ring.with_leading_vars(&[var.as_str()]),
            AlgebraSpec::Table { .. } => {
                return Err(self.err(
                    p,
                    "table algebras take sections as coordinates `[c1, ..., cn]`",
                ))
            }
        };
        Ok(SectionSpec::Poly(self.poly_in(&ambient, p)?))
    }

    fn norm_command(&self, rest: Piece) -> Result<CommandKind> {
        let (sub, args) = rest.split_word();
        match sub.text {
            "det" => {
                let (name, section) = args.split_word();
                let alg = self.algebra(name)?;
                let s = self.section_spec(&alg, section)?;
                Ok(CommandKind::NormDet(alg, s))
            }
            "sigma" => {
                let (name, body) = args.split_word();
                let alg = self.algebra(name)?;
                let via = body
                    .find_word("via")
                    .ok_or_else(|| self.err(body, "expected `... via <map>`"))?;
                let sections = body
                    .slice(0, via)
                    .split_top(',')
                    .into_iter()
                    .map(|s| self.section_spec(&alg, s))
                    .collect::<Result<Vec<_>>>()?;
                let map_piece = body.tail(via + "via".len()).trim();
                let map = match self.lookup(map_piece, &["map"])? {
                    (_, Named::Map(m)) => m,
                    _ => unreachable!("kind checked"),
                };
                Ok(CommandKind::NormSigma(alg, sections, map))
            }
            "check-free" => {
                let at = args
                    .find_word("rank")
                    .ok_or_else(|| self.err(args, "expected `norm check-free (rows) rank <n>`"))?;
                let matrix_piece = self.parenthesized(args.slice(0, at), "matrix rows")?;
                let ring = self.scope(args)?.ring.clone();
                let mut matrix = Vec::new();
                for row in matrix_piece.split_top(',') {
                    matrix
                        .push(self.poly_list_in(&ring, self.parenthesized(row, "a matrix row")?)?);
                }
                let width = matrix.first().map_or(0, Vec::len);
                if matrix.iter().any(|r| r.len() != width) {
                    return Err(self.err(matrix_piece, "matrix rows have different lengths"));
                }
                let rank = self.number(args.tail(at + "rank".len()).trim())?;
                Ok(CommandKind::NormCheckFree(matrix, rank))
            }
            _ => Err(self.err(
                sub,
                "expected `norm det`, `norm sigma` or `norm check-free`",
            )),
        }
    }

    fn hilb_command(&self, rest: Piece) -> Result<CommandKind> {
        let (sub, args) = rest.split_word();
        let field = self.scope(rest)?.ring.field();
        let n_of = |flags: &HashMap<&str, Piece>| -> Result<usize> {
            let p = flags
                .get("n")
                .ok_or_else(|| self.err(args, "missing `--n <points>`"))?;
            let n = self.number(*p)?;
            if n == 0 {
                return Err(self.err(*p, "number of points must be at least 1"));
            }
            Ok(n)
        };
        let sections_of =
            |flags: &HashMap<&str, Piece>, space: AffineSpace| -> Result<Vec<Polynomial>> {
                let ring = space.ring(field);
                let sections = flags
                    .get("invert")
                    .map(|p| self.poly_list_in(&ring, *p))
                    .transpose()?
                    .unwrap_or_default();
                for (s, p) in sections.iter().zip(
                    flags
                        .get("invert")
                        .map(|p| p.split_top(','))
                        .unwrap_or_default(),
                ) {
                    if s.is_zero() {
                        return Err(self.err(p, "sections must be nonzero"));
                    }
                }
                Ok(sections)
            };
        let need_prime = |p: Piece| -> Result<()> {
            match field.order() {
                Some(_) => Ok(()),
                None => Err(self.err(
                    p,
                    format!("point counts need a prime field, current field is {field}"),
                )),
            }
        };
        match sub.text {
            "universal" => {
                let flags = self.flags(args, &[("n", true)])?;
                Ok(CommandKind::HilbUniversal { n: n_of(&flags)? })
            }
            "norm" => {
                let flags = self.flags(args, &[("n", true), ("f", true)])?;
                let f_piece = flags
                    .get("f")
                    .ok_or_else(|| self.err(args, "missing `--f <polynomial in x>`"))?;
                let f = self.poly_in(&AffineSpace::Line.ring(field), *f_piece)?;
                Ok(CommandKind::HilbNorm {
                    n: n_of(&flags)?,
                    f,
                })
            }
            "enumerate" => {
                let flags = self.flags(
                    args,
                    &[
                        ("n", true),
                        ("invert", true),
                        ("plane", false),
                        ("list", false),
                    ],
                )?;
                need_prime(sub)?;
                let space = if flags.contains_key("plane") {
                    AffineSpace::Plane
                } else {
                    AffineSpace::Line
                };
                Ok(CommandKind::HilbEnumerate {
                    n: n_of(&flags)?,
                    space,
                    sections: sections_of(&flags, space)?,
                    list: flags.contains_key("list"),
                })
            }
            "verify" => {
                let flags =
                    self.flags(args, &[("n", true), ("invert", true), ("theorem", true)])?;
                need_prime(sub)?;
                let t = flags
                    .get("theorem")
                    .ok_or_else(|| self.err(args, "missing `--theorem 5.5|5.6|5.7`"))?;
                let theorem = match t.text {
                    "5.5" | "localized" => Theorem::Localized,
                    "5.6" | "open" => Theorem::Open,
                    "5.7" | "stalk" => Theorem::Stalk,
                    _ => return Err(self.err(*t, "expected `5.5`, `5.6` or `5.7`")),
                };
                let sections = sections_of(&flags, AffineSpace::Line)?;
                if theorem == Theorem::Stalk && !sections.is_empty() {
                    return Err(self.err(args, "the stalk count takes no `--invert`"));
                }
                Ok(CommandKind::HilbVerify {
                    theorem,
                    n: n_of(&flags)?,
                    sections,
                })
            }
            _ => Err(self.err(
                sub,
                "expected `hilb universal`, `hilb norm`, `hilb enumerate` or `hilb verify`",
            )),
        }
    }

    fn counterexample_command(&self, rest: Piece) -> Result<CommandKind> {
        let (sub, args) = rest.split_word();
        if sub.text != "demo" {
            return Err(self.err(sub, "expected `counterexample demo`"));
        }
        let flags = self.flags(args, &[("f", true), ("samples", true)])?;
        let ring = match &self.scope {
            Some(s) if s.ring.nvars() == 2 && s.relations.is_empty() => s.ring.clone(),
            Some(s) => {
                return Err(self.err(
                    sub,
                    format!(
                        "the demo runs over a polynomial ring k[x,y], current ring is {}",
                        s.ring
                    ),
                ))
            }
            None => Ring::from_str("Q[x,y]").expect("valid ring"),
        };
        let f = match flags.get("f") {
            Some(p) => self.poly_in(&ring, *p)?,
            None => Polynomial::var(&ring, 0),
        };
        if f.is_zero() {
            return Err(self.err(flags.get("f").copied().unwrap_or(sub), "f must be nonzero"));
        }
        let (samples, source) = match flags.get("samples") {
            None => (
                self.at(sub, hilbloc::nonscheme::standard_samples(&ring))?,
                "standard".to_string(),
            ),
            Some(p) => {
                let path = self.base_dir.join(p.text);
                let text = std::fs::read_to_string(&path)
                    .map_err(|e| self.err(*p, format!("cannot read {}: {e}", path.display())))?;
                let samples = parse_samples(&ring, &text)
                    .map_err(|e| self.err(*p, format!("in {}: {e}", p.text)))?;
                (samples, p.text.to_string())
            }
        };
        Ok(CommandKind::Counterexample { f, samples, source })
    }
}

fn scope_text(s: &Scope) -> String {
    if s.relations.is_empty() {
        s.ring.to_string()
    } else {
        let rels: Vec<String> = s.relations.iter().map(ToString::to_string).collect();
        format!("{} / ({})", s.ring, rels.join(", "))
    }
}

/// Base ring of an algebra declared in `scope`.
pub fn base_ring_of(scope: &Scope, alg: &AlgebraDef) -> Ring {
    match &alg.spec {
        AlgebraSpec::Quotient { fiber, .. } => {
            let keep: Vec<usize> = (0..scope.ring.nvars())
                .filter(|&v| !fiber.contains(&scope.ring.vars()[v]))
                .collect();
            scope.ring.subring(&keep)
        }
        AlgebraSpec::Monic { .. } | AlgebraSpec::Table { .. } => scope.ring.clone(),
    }
}

/// One fraction per line in the form `numerator / [h1]^k [h2]`; `#` starts a comment.
pub fn parse_samples(ring: &Ring, text: &str) -> Result<Vec<FactoredFraction>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("");
        if body.trim().is_empty() {
            continue;
        }
        let lead = body.len() - body.trim_start().len();
        out.push(FactoredFraction::parse_at(
            ring,
            body.trim(),
            i + 1,
            lead + 1,
        )?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<SessionFile> {
        parse_session(text, Path::new("."))
    }

    fn parse_error(text: &str) -> (usize, usize, String) {
        match parse(text) {
            Err(Error::Parse {
                line,
                column,
                message,
            }) => (line, column, message),
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn one_command_session() {
        let s = parse("ring Q[x,y]; ideal I = (x^2-1, x*y-y); gb I;").unwrap();
        assert_eq!(s.commands.len(), 1);
        assert_eq!(s.commands[0].echo, "gb I");
        assert!(matches!(&s.commands[0].kind, CommandKind::Gb(i) if i.generators().len() == 2));
    }

    #[test]
    fn verification_command() {
        let s = parse("ring F3[x]; hilb verify --theorem 5.5 --n 2 --invert x;").unwrap();
        match &s.commands[0].kind {
            CommandKind::HilbVerify {
                theorem,
                n,
                sections,
            } => {
                assert_eq!((*theorem, *n, sections.len()), (Theorem::Localized, 2, 1));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn malformed_exponent_is_located() {
        let (line, column, _) = parse_error("ring Q[x];\npoly f = x^-1;");
        assert_eq!((line, column), (2, 12));
    }

    #[test]
    fn names_and_rings_are_checked() {
        let (line, column, msg) = parse_error("ring Q[x];\ngb J;");
        assert_eq!((line, column), (2, 4));
        assert!(msg.contains("undefined name `J`"));
        let (_, _, msg) = parse_error("ring Q[x]; ideal I = (x); ring F3[x]; gb I;");
        assert!(msg.contains("ring mismatch"), "{msg}");
        let (_, _, msg) = parse_error("ring Q[x]; poly f = x; poly f = 1;");
        assert!(msg.contains("already defined"));
        let (_, _, msg) = parse_error("gb (x);");
        assert!(msg.contains("no ring declared"));
        // same ring declared again keeps earlier names usable
        assert!(parse("ring Q[x]; ideal I = (x); ring Q[x]; gb I;").is_ok());
    }

    #[test]
    fn comments_and_definitions() {
        let text = "# header\nring Q[a]; # base\ninvert a s;\nmap phi = (1) into Q[t];\n\
                    algebra E = monic x (-a, 0);\nnorm det E x;\nfrac eq 1 / [s] == a / [s^2];\nfrac factor phi;\n\
                    algebra T = table (1, u) unit (1, 0) products ((1, 0), (0, 1)), ((0, 1), (a, 0));\nnorm det T [0, 1];";
        let s = parse(text).unwrap();
        assert_eq!(s.commands.len(), 4);
        assert!(
            matches!(&s.commands[1].kind, CommandKind::FracEq(a, b) if a.exponent == vec![(0, 1)] && b.exponent == vec![(0, 2)])
        );
    }

    #[test]
    fn option_errors() {
        let (_, _, msg) = parse_error("ring F3[x]; hilb verify --theorem 9.9 --n 2;");
        assert!(msg.contains("5.5"));
        let (_, _, msg) = parse_error("ring F3[x]; hilb enumerate --n 2 --bogus;");
        assert!(msg.contains("unknown option"));
        let (_, _, msg) = parse_error("ring Q[x]; hilb enumerate --n 2;");
        assert!(msg.contains("prime field"));
    }
}
