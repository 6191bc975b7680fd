//! Text formats: the `.qpef` game grammar, behavior-profile files, and the
//! flat key/value result document. See `docs/format.md`.

use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::eps_field::{EpsPoly, EpsRat};
use crate::equilibrium::{VerificationReport, VerifyMode, Violation};
use crate::game_model::{BehaviorProfile, GameBuilder, GameError, GameTree, InfosetId, Node, NodeId};
use crate::scalar::{fmt_rational, Rational};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Loc {
    pub line: usize,
    pub col: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("{line}:{col}: syntax error: expected {expected}")]
    Syntax { line: usize, col: usize, expected: String },
    #[error("{line}:{col}: {source}")]
    Invalid {
        line: usize,
        col: usize,
        #[source]
        source: GameError,
    },
    #[error("{line}:{col}: {message}")]
    Profile { line: usize, col: usize, message: String },
}

fn syntax(loc: Loc, expected: impl Into<String>) -> FormatError {
    FormatError::Syntax {
        line: loc.line,
        col: loc.col,
        expected: expected.into(),
    }
}

fn invalid(loc: Loc, source: GameError) -> FormatError {
    FormatError::Invalid {
        line: loc.line,
        col: loc.col,
        source,
    }
}

fn profile_err(loc: Loc, message: impl Into<String>) -> FormatError {
    FormatError::Profile {
        line: loc.line,
        col: loc.col,
        message: message.into(),
    }
}

// ---------------------------------------------------------------------------
// S-expressions

#[derive(Debug, Clone, PartialEq)]
enum Sexp {
    List(Vec<Sexp>, Loc),
    /// Bare or quoted atom; `quoted` keeps `"1/2"` from reading as a number.
    Atom { text: String, quoted: bool, loc: Loc },
    Keyword(String, Loc),
}

impl Sexp {
    fn loc(&self) -> Loc {
        match self {
            Sexp::List(_, l) | Sexp::Keyword(_, l) => *l,
            Sexp::Atom { loc, .. } => *loc,
        }
    }
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    loc: Loc,
}

fn is_delim(c: char) -> bool {
    c.is_whitespace() || matches!(c, '(' | ')' | '"' | ';')
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer {
            chars: text.chars().peekable(),
            loc: Loc { line: 1, col: 1 },
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.loc.line += 1;
            self.loc.col = 1;
        } else {
            self.loc.col += 1;
        }
        Some(c)
    }

    fn skip_trivia(&mut self) {
        while let Some(&c) = self.chars.peek() {
            if c == ';' {
                while self.chars.peek().is_some_and(|&c| c != '\n') {
                    self.bump();
                }
            } else if c.is_whitespace() {
                self.bump();
            } else {
                break;
            }
        }
    }

    fn bare(&mut self) -> String {
        let mut s = String::new();
        while let Some(&c) = self.chars.peek() {
            if is_delim(c) {
                break;
            }
            s.push(c);
            self.bump();
        }
        s
    }

    fn quoted(&mut self, start: Loc) -> Result<String, FormatError> {
        self.bump();
        let mut s = String::new();
        loop {
            match self.bump() {
                None => return Err(syntax(start, "closing '\"'")),
                Some('"') => return Ok(s),
                Some('\\') => match self.bump() {
                    Some(c @ ('"' | '\\')) => s.push(c),
                    _ => return Err(syntax(self.loc, "'\\\"' or '\\\\' escape")),
                },
                Some(c) => s.push(c),
            }
        }
    }

    fn sexp(&mut self) -> Result<Sexp, FormatError> {
        self.skip_trivia();
        let loc = self.loc;
        match self.chars.peek().copied() {
            None => Err(syntax(loc, "an expression")),
            Some(')') => Err(syntax(loc, "an expression, found ')'")),
            Some('(') => {
                self.bump();
                let mut items = Vec::new();
                loop {
                    self.skip_trivia();
                    match self.chars.peek() {
                        None => return Err(syntax(self.loc, format!("')' closing the list at {}:{}", loc.line, loc.col))),
                        Some(')') => {
                            self.bump();
                            return Ok(Sexp::List(items, loc));
                        }
                        Some(_) => items.push(self.sexp()?),
                    }
                }
            }
            Some('"') => Ok(Sexp::Atom {
                text: self.quoted(loc)?,
                quoted: true,
                loc,
            }),
            Some(':') => {
                self.bump();
                let name = self.bare();
                if name.is_empty() {
                    return Err(syntax(loc, "a keyword name after ':'"));
                }
                Ok(Sexp::Keyword(name, loc))
            }
            Some(_) => Ok(Sexp::Atom {
                text: self.bare(),
                quoted: false,
                loc,
            }),
        }
    }
}

fn read_single(text: &str) -> Result<Sexp, FormatError> {
    let mut lx = Lexer::new(text);
    let top = lx.sexp()?;
    lx.skip_trivia();
    if lx.chars.peek().is_some() {
        return Err(syntax(lx.loc, "end of input"));
    }
    Ok(top)
}

// ---------------------------------------------------------------------------
// scalar tokens

/// Integer or `p/q` with a nonzero denominator; nothing else.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let digits = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    let unsigned = num.strip_prefix(['-', '+']).unwrap_or(num);
    if !digits(unsigned) {
        return None;
    }
    let n: BigInt = num.strip_prefix('+').unwrap_or(num).parse().ok()?;
    let d: BigInt = match den {
        Some(d) if digits(d) => d.parse().ok()?,
        Some(_) => return None,
        None => BigInt::one(),
    };
    if d.is_zero() {
        return None;
    }
    Some(Rational::new(n, d))
}

const RATIONAL: &str = "a rational number (integer or p/q)";

fn expect_rational(s: &Sexp) -> Result<Rational, FormatError> {
    match s {
        Sexp::Atom {
            text, quoted: false, ..
        } => parse_rational(text).ok_or_else(|| syntax(s.loc(), RATIONAL)),
        _ => Err(syntax(s.loc(), RATIONAL)),
    }
}

fn expect_usize(s: &Sexp, what: &str) -> Result<usize, FormatError> {
    if let Sexp::Atom {
        text, quoted: false, ..
    } = s
    {
        if !text.is_empty() && text.bytes().all(|b| b.is_ascii_digit()) {
            if let Ok(n) = text.parse() {
                return Ok(n);
            }
        }
    }
    Err(syntax(s.loc(), what))
}

fn expect_label(s: &Sexp, what: &str) -> Result<String, FormatError> {
    match s {
        Sexp::Atom { text, .. } if !text.is_empty() => Ok(text.clone()),
        _ => Err(syntax(s.loc(), what)),
    }
}

fn expect_list<'s>(s: &'s Sexp, what: &str) -> Result<&'s [Sexp], FormatError> {
    match s {
        Sexp::List(items, _) => Ok(items),
        _ => Err(syntax(s.loc(), what)),
    }
}

fn head_is(items: &[Sexp], word: &str) -> bool {
    matches!(items.first(), Some(Sexp::Atom { text, quoted: false, .. }) if text == word)
}

/// Splits `:key value` pairs off the front of `items`; the rest are
/// returned in order.
fn split_keywords<'s>(
    items: &'s [Sexp],
    allowed: &[&str],
) -> Result<(BTreeMap<String, &'s Sexp>, Vec<&'s Sexp>), FormatError> {
    let mut kw = BTreeMap::new();
    let mut rest = Vec::new();
    let mut i = 0;
    while i < items.len() {
        if let Sexp::Keyword(name, loc) = &items[i] {
            if !allowed.contains(&name.as_str()) {
                return Err(syntax(*loc, format!("one of :{}", allowed.join(" :"))));
            }
            if !rest.is_empty() {
                return Err(syntax(*loc, "keywords before child expressions"));
            }
            let Some(value) = items.get(i + 1) else {
                return Err(syntax(*loc, format!("a value after :{name}")));
            };
            if kw.insert(name.clone(), value).is_some() {
                return Err(syntax(*loc, format!(":{name} only once")));
            }
            i += 2;
        } else {
            rest.push(&items[i]);
            i += 1;
        }
    }
    Ok((kw, rest))
}

// ---------------------------------------------------------------------------
// games

/// A parsed game file: header metadata plus the validated tree.
#[derive(Debug, Clone, PartialEq)]
pub struct GameDocument {
    pub version: u32,
    /// Player names, if the header declared them.
    pub names: Option<Vec<String>>,
    pub game: GameTree,
}

impl GameDocument {
    pub fn new(game: GameTree) -> Self {
        GameDocument {
            version: FORMAT_VERSION,
            names: None,
            game,
        }
    }
}

struct TreeReader {
    builder: GameBuilder,
    locs: Vec<Loc>,
}

impl TreeReader {
    fn record(&mut self, id: NodeId, loc: Loc) -> NodeId {
        debug_assert_eq!(id.0, self.locs.len());
        self.locs.push(loc);
        id
    }

    fn node(&mut self, s: &Sexp) -> Result<NodeId, FormatError> {
        const NODE: &str = "a node: (leaf ...), (chance ...) or (decision ...)";
        let items = expect_list(s, NODE)?;
        let loc = s.loc();
        if head_is(items, "leaf") {
            if items.len() != 2 {
                return Err(syntax(loc, "(leaf (u1 ... un))"));
            }
            let payoffs = expect_list(&items[1], "a payoff list (u1 ... un)")?
                .iter()
                .map(expect_rational)
                .collect::<Result<Vec<_>, _>>()?;
            let id = self.builder.leaf(payoffs);
            Ok(self.record(id, loc))
        } else if head_is(items, "chance") {
            let (kw, edges) = split_keywords(&items[1..], &["id"])?;
            let label = kw.get("id").map(|v| expect_label(v, "a chance node name")).transpose()?;
            let mut outcomes = Vec::new();
            for e in edges {
                let parts = expect_list(e, "an outcome (label p/q subtree)")?;
                if parts.len() != 3 {
                    return Err(syntax(e.loc(), "an outcome (label p/q subtree)"));
                }
                let a = expect_label(&parts[0], "an outcome label")?;
                let p = expect_rational(&parts[1])?;
                let child = self.node(&parts[2])?;
                outcomes.push((a, p, child));
            }
            let id = self.builder.chance(
                label.as_deref(),
                outcomes.iter().map(|(a, p, c)| (a.as_str(), p.clone(), *c)).collect(),
            );
            Ok(self.record(id, loc))
        } else if head_is(items, "decision") {
            let (kw, edges) = split_keywords(&items[1..], &["player", "infoset", "actions"])?;
            let need = |k: &str| kw.get(k).copied().ok_or_else(|| syntax(loc, format!(":{k}")));
            let player = expect_usize(need("player")?, "a 1-based player number")?;
            if player == 0 {
                return Err(syntax(need("player")?.loc(), "a 1-based player number"));
            }
            let infoset = expect_label(need("infoset")?, "an information set name")?;
            let actions = expect_list(need("actions")?, "an action list (a b ...)")?
                .iter()
                .map(|a| expect_label(a, "an action label"))
                .collect::<Result<Vec<_>, _>>()?;
            let mut children = Vec::new();
            for e in edges {
                let parts = expect_list(e, "an edge (action subtree)")?;
                if parts.len() != 2 {
                    return Err(syntax(e.loc(), "an edge (action subtree)"));
                }
                let a = expect_label(&parts[0], "an action label")?;
                let child = self.node(&parts[1])?;
                children.push((a, child));
            }
            let refs: Vec<&str> = actions.iter().map(String::as_str).collect();
            let id = self.builder.decision(
                player - 1,
                &infoset,
                &refs,
                children.iter().map(|(a, c)| (a.as_str(), *c)).collect(),
            );
            Ok(self.record(id, loc))
        } else {
            Err(syntax(loc, NODE))
        }
    }

    fn locate(&self, e: &GameError, fallback: Loc) -> Loc {
        let node = match e {
            GameError::NotATree { node, .. }
            | GameError::BadChanceDistribution { node, .. }
            | GameError::InconsistentInfoset { node, .. }
            | GameError::ImperfectRecall { node, .. }
            | GameError::BadPayoffs { node, .. }
            | GameError::BadPlayer { node, .. } => Some(*node),
            _ => None,
        };
        node.and_then(|n| self.locs.get(n.0).copied()).unwrap_or(fallback)
    }
}

/// Parses and validates a `.qpef` document.
pub fn parse(text: &str) -> Result<GameDocument, FormatError> {
    let top = read_single(text)?;
    let items = expect_list(&top, "(game ...)")?;
    if !head_is(items, "game") {
        return Err(syntax(top.loc(), "(game ...)"));
    }
    let (kw, rest) = split_keywords(&items[1..], &["version", "players", "names"])?;
    let version = match kw.get("version") {
        Some(v) => {
            let n = expect_usize(v, "a format version")?;
            if n != FORMAT_VERSION as usize {
                return Err(syntax(v.loc(), format!("format version {FORMAT_VERSION}")));
            }
            FORMAT_VERSION
        }
        None => FORMAT_VERSION,
    };
    let Some(players_sexp) = kw.get("players") else {
        return Err(syntax(top.loc(), ":players"));
    };
    let players = expect_usize(players_sexp, "a player count")?;
    let names = match kw.get("names") {
        Some(v) => {
            let list = expect_list(v, "a name list (A B ...)")?
                .iter()
                .map(|n| expect_label(n, "a player name"))
                .collect::<Result<Vec<_>, _>>()?;
            if list.len() != players {
                return Err(syntax(v.loc(), format!("{players} player names")));
            }
            Some(list)
        }
        None => None,
    };
    let [root_sexp] = rest.as_slice() else {
        let loc = rest.get(1).map_or(top.loc(), |s| s.loc());
        return Err(syntax(loc, "exactly one root node"));
    };
    let mut reader = TreeReader {
        builder: GameBuilder::new(players),
        locs: Vec::new(),
    };
    let root = reader.node(root_sexp)?;
    let game = reader.builder.build(root).map_err(|e| {
        let fallback = if matches!(e, GameError::NoPlayers) {
            players_sexp.loc()
        } else {
            top.loc()
        };
        invalid(reader.locate(&e, fallback), e)
    })?;
    Ok(GameDocument { version, names, game })
}

/// Writes `s` bare when it reads back as the same atom, quoted otherwise.
fn atom(s: &str) -> String {
    let plain = !s.is_empty() && !s.starts_with(':') && !s.chars().any(is_delim);
    if plain {
        s.to_owned()
    } else {
        let mut q = String::from("\"");
        for c in s.chars() {
            if matches!(c, '"' | '\\') {
                q.push('\\');
            }
            q.push(c);
        }
        q.push('"');
        q
    }
}

fn list_of<'a>(items: impl IntoIterator<Item = &'a String>) -> String {
    let parts: Vec<String> = items.into_iter().map(|s| atom(s)).collect();
    format!("({})", parts.join(" "))
}

fn write_node(game: &GameTree, id: NodeId, indent: usize, out: &mut String) {
    let pad = " ".repeat(indent);
    match game.node(id) {
        Node::Leaf { payoffs } => {
            let us: Vec<String> = payoffs.iter().map(fmt_rational).collect();
            let _ = write!(out, "(leaf ({}))", us.join(" "));
        }
        Node::Chance { label, outcomes } => {
            out.push_str("(chance");
            if let Some(l) = label {
                let _ = write!(out, " :id {}", atom(l));
            }
            for o in outcomes {
                let _ = write!(out, "\n{pad}  ({} {}", atom(&o.label), fmt_rational(&o.prob));
                write_edge_child(game, o.child, indent + 2, out);
            }
            out.push(')');
        }
        Node::Decision { infoset, children } => {
            let h = game.infoset(*infoset);
            let _ = write!(
                out,
                "(decision :player {} :infoset {} :actions {}",
                h.owner + 1,
                atom(&h.name),
                list_of(&h.actions)
            );
            for (a, c) in h.actions.iter().zip(children) {
                let _ = write!(out, "\n{pad}  ({}", atom(a));
                write_edge_child(game, *c, indent + 2, out);
            }
            out.push(')');
        }
    }
}

/// Leaves stay on the edge's line; inner nodes start a new, deeper line.
fn write_edge_child(game: &GameTree, child: NodeId, indent: usize, out: &mut String) {
    if matches!(game.node(child), Node::Leaf { .. }) {
        out.push(' ');
        write_node(game, child, indent, out);
    } else {
        let _ = write!(out, "\n{}", " ".repeat(indent + 2));
        write_node(game, child, indent + 2, out);
    }
    out.push(')');
}

/// Canonical text: fixed keyword order, two-space indentation, children in
/// declared action order, rationals in lowest terms, trailing newline.
pub fn serialize(doc: &GameDocument) -> String {
    let mut out = format!("(game :version {} :players {}", doc.version, doc.game.num_players());
    if let Some(names) = &doc.names {
        let _ = write!(out, " :names {}", list_of(names));
    }
    out.push_str("\n  ");
    write_node(&doc.game, doc.game.root(), 2, &mut out);
    out.push_str(")\n");
    out
}

pub fn serialize_game(game: &GameTree) -> String {
    serialize(&GameDocument::new(game.clone()))
}

// ---------------------------------------------------------------------------
// profiles

/// Reads `(profile (H (a p) (b q)) ...)`, which must cover every
/// information set and action of `game` exactly once.
pub fn parse_profile(text: &str, game: &GameTree) -> Result<BehaviorProfile<Rational>, FormatError> {
    let top = read_single(text)?;
    let items = expect_list(&top, "(profile ...)")?;
    if !head_is(items, "profile") {
        return Err(syntax(top.loc(), "(profile ...)"));
    }
    let mut probs: Vec<Option<Vec<Option<Rational>>>> = vec![None; game.num_infosets()];
    for entry in &items[1..] {
        let parts = expect_list(entry, "an information set entry (H (a p) ...)")?;
        let Some(first) = parts.first() else {
            return Err(syntax(entry.loc(), "an information set name"));
        };
        let name = expect_label(first, "an information set name")?;
        let Some(h) = game.infoset_by_name(&name) else {
            return Err(profile_err(first.loc(), format!("unknown information set {name}")));
        };
        if probs[h.0].is_some() {
            return Err(profile_err(first.loc(), format!("information set {name} listed twice")));
        }
        let info = game.infoset(h);
        let mut local = vec![None; info.num_actions()];
        for pair in &parts[1..] {
            let ap = expect_list(pair, "an action entry (a p/q)")?;
            if ap.len() != 2 {
                return Err(syntax(pair.loc(), "an action entry (a p/q)"));
            }
            let a = expect_label(&ap[0], "an action label")?;
            let Some(i) = info.action_index(&a) else {
                return Err(profile_err(ap[0].loc(), format!("action {a} is not available at {name}")));
            };
            if local[i].is_some() {
                return Err(profile_err(ap[0].loc(), format!("action {a} listed twice")));
            }
            local[i] = Some(expect_rational(&ap[1])?);
        }
        let local = local
            .into_iter()
            .zip(&info.actions)
            .map(|(p, a)| p.ok_or_else(|| profile_err(entry.loc(), format!("missing action {a} at {name}"))))
            .collect::<Result<Vec<_>, _>>()?;
        let total: Rational = local.iter().sum();
        if local.iter().any(|p| *p < Rational::zero()) || !total.is_one() {
            return Err(profile_err(entry.loc(), format!("probabilities at {name} do not form a distribution")));
        }
        probs[h.0] = Some(local.into_iter().map(Some).collect());
    }
    let probs = probs
        .into_iter()
        .enumerate()
        .map(|(i, p)| {
            p.map(|v| v.into_iter().map(|x| x.expect("filled")).collect())
                .ok_or_else(|| profile_err(top.loc(), format!("missing information set {}", game.infoset(InfosetId(i)).name)))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(BehaviorProfile { probs })
}

pub fn serialize_profile(game: &GameTree, profile: &BehaviorProfile<Rational>) -> String {
    let mut out = String::from("(profile");
    for (h, local) in game.infosets().iter().zip(&profile.probs) {
        let _ = write!(out, "\n  ({}", atom(&h.name));
        for (a, p) in h.actions.iter().zip(local) {
            let _ = write!(out, " ({} {})", atom(a), fmt_rational(p));
        }
        out.push(')');
    }
    out.push_str(")\n");
    out
}

// ---------------------------------------------------------------------------
// results

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResultMode {
    TwoPlayer,
    ZeroSum,
    Multiplayer,
    Verify,
}

impl ResultMode {
    pub fn tag(self) -> &'static str {
        match self {
            ResultMode::TwoPlayer => "two-player",
            ResultMode::ZeroSum => "zero-sum",
            ResultMode::Multiplayer => "multiplayer",
            ResultMode::Verify => "verify",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Probability {
    /// A rational function of ε; the document also records its limit.
    Symbolic(EpsRat),
    Exact(Rational),
}

#[derive(Debug, Clone, PartialEq)]
pub struct BehaviorEntry {
    pub infoset: String,
    pub action: String,
    pub prob: Probability,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    /// Key segment under `verify.`, e.g. `sample1` or `nash`.
    pub name: String,
    /// The ε₀ the profile was evaluated at, when it was evaluated at all.
    pub eps0: Option<Rational>,
    pub report: VerificationReport,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultDocument {
    pub mode: ResultMode,
    pub behavior: Vec<BehaviorEntry>,
    pub value: Option<EpsRat>,
    pub checks: Vec<Check>,
    /// Extra `key = value` lines (solver statistics, parameters). Values are
    /// written verbatim.
    pub extra: BTreeMap<String, String>,
}

impl ResultDocument {
    pub fn new(mode: ResultMode) -> Self {
        ResultDocument {
            mode,
            behavior: Vec::new(),
            value: None,
            checks: Vec::new(),
            extra: BTreeMap::new(),
        }
    }

    pub fn add_symbolic(&mut self, game: &GameTree, profile: &BehaviorProfile<EpsRat>) {
        self.add_profile(game, profile, |p| Probability::Symbolic(p.clone()));
    }

    pub fn add_exact(&mut self, game: &GameTree, profile: &BehaviorProfile<Rational>) {
        self.add_profile(game, profile, |p| Probability::Exact(p.clone()));
    }

    fn add_profile<T>(&mut self, game: &GameTree, profile: &BehaviorProfile<T>, f: impl Fn(&T) -> Probability) {
        for (h, local) in game.infosets().iter().zip(&profile.probs) {
            for (a, p) in h.actions.iter().zip(local) {
                self.behavior.push(BehaviorEntry {
                    infoset: h.name.clone(),
                    action: a.clone(),
                    prob: f(p),
                });
            }
        }
    }

    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.report.pass)
    }
}

/// Key segments are bare unless they contain a separator.
fn key_part(s: &str) -> String {
    if !s.is_empty() && !s.chars().any(|c| c.is_whitespace() || matches!(c, '.' | '=' | '"' | '[' | ']')) {
        s.to_owned()
    } else {
        format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
    }
}

/// Ascending coefficients, no trailing zeros; the zero polynomial is `[]`.
pub fn coeff_array(p: &EpsPoly) -> String {
    let parts: Vec<String> = p.coeffs().iter().map(fmt_rational).collect();
    format!("[{}]", parts.join(", "))
}

/// Scalar rationals in results are always written `p/q`.
pub fn fraction(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn put_eps_rat(map: &mut BTreeMap<String, String>, prefix: &str, v: &EpsRat) {
    map.insert(format!("{prefix}.num"), coeff_array(v.numer()));
    map.insert(format!("{prefix}.den"), coeff_array(v.denom()));
    let limit = v.limit_at_zero().map_or_else(|_| "unbounded".to_owned(), |l| fraction(&l));
    map.insert(format!("{prefix}.limit"), limit);
}

fn describe(v: &Violation) -> String {
    match v {
        Violation::Ratio {
            player,
            infoset,
            worse,
            better,
            k_worse,
            k_better,
        } => format!(
            "player {} at {}: {} (K {}) too likely against {} (K {})",
            player + 1,
            infoset,
            worse,
            fraction(k_worse),
            better,
            fraction(k_better)
        ),
        Violation::Deviation {
            player,
            payoff,
            best_response,
        } => format!(
            "player {} earns {} but can get {}",
            player + 1,
            fraction(payoff),
            fraction(best_response)
        ),
    }
}

/// The document as a sorted key map (what `emit_result` prints).
pub fn result_entries(doc: &ResultDocument) -> BTreeMap<String, String> {
    let mut map = doc.extra.clone();
    map.insert("mode".into(), doc.mode.tag().into());
    for e in &doc.behavior {
        let prefix = format!("behavior.{}.{}", key_part(&e.infoset), key_part(&e.action));
        match &e.prob {
            Probability::Symbolic(p) => put_eps_rat(&mut map, &prefix, p),
            Probability::Exact(p) => {
                map.insert(format!("{prefix}.value"), fraction(p));
            }
        }
    }
    if let Some(v) = &doc.value {
        put_eps_rat(&mut map, "value", v);
    }
    for c in &doc.checks {
        let prefix = format!("verify.{}", key_part(&c.name));
        let (kind, ratio, delta) = match &c.report.mode {
            VerifyMode::QuasiProper { ratio } => ("quasi-proper", Some(ratio), None),
            VerifyMode::DeltaAlmost { ratio, delta } => ("delta-almost", Some(ratio), Some(delta)),
            VerifyMode::Nash => ("nash", None, None),
        };
        map.insert(format!("{prefix}.kind"), kind.into());
        if let Some(e) = &c.eps0 {
            map.insert(format!("{prefix}.eps0"), fraction(e));
        }
        if let Some(r) = ratio {
            map.insert(format!("{prefix}.ratio"), fraction(r));
        }
        if let Some(d) = delta {
            map.insert(format!("{prefix}.delta"), fraction(d));
        }
        map.insert(format!("{prefix}.pass"), c.report.pass.to_string());
        map.insert(format!("{prefix}.violations"), c.report.violations.len().to_string());
        let width = c.report.violations.len().saturating_sub(1).to_string().len();
        for (i, v) in c.report.violations.iter().enumerate() {
            map.insert(format!("{prefix}.violation.{i:0width$}"), describe(v));
        }
    }
    map.insert("verify.pass".into(), doc.pass().to_string());
    map
}

/// One `key = value` line per entry, keys in byte order.
pub fn emit_result(doc: &ResultDocument) -> String {
    result_entries(doc).iter().fold(String::new(), |mut out, (k, v)| {
        let _ = writeln!(out, "{k} = {v}");
        out
    })
}

/// Reads an emitted document back into its key map.
pub fn read_result(text: &str) -> Result<BTreeMap<String, String>, FormatError> {
    let mut map = BTreeMap::new();
    let mut seen = HashSet::new();
    for (i, line) in text.lines().enumerate() {
        let loc = Loc { line: i + 1, col: 1 };
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once(" = ") else {
            return Err(syntax(loc, "'key = value'"));
        };
        if !seen.insert(k.to_owned()) {
            return Err(syntax(loc, format!("a new key, {k} is repeated")));
        }
        map.insert(k.to_owned(), v.to_owned());
    }
    Ok(map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    const PENNIES: &str = "\
; matching pennies, sequential with hidden first move
(game :players 2 :names (Row Col)
  (decision :player 1 :infoset R :actions (h t)
    (h (decision :player 2 :infoset C :actions (h t)
         (h (leaf (1 -1))) (t (leaf (-1 1)))))
    (t (decision :player 2 :infoset C :actions (h t)
         (t (leaf (1 -1))) (h (leaf (-1 1)))))))
";

    #[test]
    fn minimal_leaf_game() {
        let doc = parse("(game :players 1 (leaf (3)))").unwrap();
        assert_eq!(doc.game.nodes().len(), 1);
        assert_eq!(doc.game.payoff(doc.game.root(), 0), &int(3));
    }

    #[test]
    fn decimals_are_syntax_errors() {
        let text = "(game :players 1\n  (chance (a 0.5 (leaf (1))) (b 1/2 (leaf (0)))))";
        match parse(text) {
            Err(FormatError::Syntax { line, col, expected }) => {
                assert_eq!((line, col), (2, 14));
                assert!(expected.contains("rational"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn validation_errors_are_located() {
        let text = "(game :players 1\n  (chance :id c (a 1/2 (leaf (1))) (b 1/3 (leaf (0)))))";
        match parse(text) {
            Err(FormatError::Invalid { line, col, source }) => {
                assert_eq!((line, col), (2, 3));
                assert!(matches!(source, GameError::BadChanceDistribution { .. }));
            }
            other => panic!("unexpected {other:?}"),
        }
        let text = "(game :players 2\n (decision :player 3 :infoset H :actions (a) (a (leaf (0 0)))))";
        assert!(matches!(parse(text), Err(FormatError::Invalid { line: 2, col: 2, .. })));
        let text = "(game :players 2 (leaf (1)))";
        assert!(matches!(parse(text), Err(FormatError::Invalid { line: 1, col: 18, .. })));
    }

    #[test]
    fn syntax_error_positions() {
        assert!(matches!(parse("(game :players 1 (leaf (1))"), Err(FormatError::Syntax { line: 1, col: 28, .. })));
        assert!(matches!(parse("(game :players 1 (leaf (1)))  x"), Err(FormatError::Syntax { line: 1, col: 31, .. })));
        assert!(matches!(parse("(game (leaf (1)))"), Err(FormatError::Syntax { line: 1, col: 1, .. })));
        assert!(matches!(parse("(game :players 1 (leaf (1/0)))"), Err(FormatError::Syntax { col: 25, .. })));
        assert!(matches!(parse("(game :players 1 :bogus 2 (leaf (1)))"), Err(FormatError::Syntax { col: 18, .. })));
    }

    #[test]
    fn edges_may_come_in_any_order() {
        let doc = parse(PENNIES).unwrap();
        let text = serialize(&doc);
        assert!(text.contains("(t\n      (decision :player 2 :infoset C :actions (h t)\n        (h (leaf (-1 1)))"));
        assert_eq!(parse(&text).unwrap(), doc);
        assert_eq!(serialize(&parse(&text).unwrap()), text);
        assert_eq!(doc.names.as_deref(), Some(&["Row".to_owned(), "Col".to_owned()][..]));
    }

    #[test]
    fn canonical_layout() {
        let doc = parse("(game :players 2 (decision :player 1 :infoset \"my set\" :actions (a b) (a (leaf (1 0))) (b (chance :id n (x 1/2 (leaf (2/4 0))) (y 1/2 (leaf (0 0)))))))").unwrap();
        let expect = "\
(game :version 1 :players 2
  (decision :player 1 :infoset \"my set\" :actions (a b)
    (a (leaf (1 0)))
    (b
      (chance :id n
        (x 1/2 (leaf (1/2 0)))
        (y 1/2 (leaf (0 0)))))))
";
        assert_eq!(serialize(&doc), expect);
        assert_eq!(parse(expect).unwrap(), doc);
    }

    #[test]
    fn profile_round_trip_and_errors() {
        let game = parse(PENNIES).unwrap().game;
        let p = parse_profile("(profile (C (t 2/3) (h 1/3)) (R (h 1/2) (t 1/2)))", &game).unwrap();
        assert_eq!(p.local(game.infoset_by_name("C").unwrap()), &[rat(1, 3), rat(2, 3)]);
        assert_eq!(parse_profile(&serialize_profile(&game, &p), &game).unwrap(), p);
        let missing = parse_profile("(profile (R (h 1/2) (t 1/2)))", &game);
        assert!(matches!(missing, Err(FormatError::Profile { .. })));
        let bad = parse_profile("(profile (R (h 1/2) (t 1/3)) (C (h 1) (t 0)))", &game);
        assert!(matches!(bad, Err(FormatError::Profile { line: 1, col: 10, .. })));
        let unknown = parse_profile("(profile (Q (h 1)))", &game);
        assert!(matches!(unknown, Err(FormatError::Profile { col: 11, .. })));
    }

    #[test]
    fn coefficient_encoding() {
        let one_minus = EpsRat::from_poly(EpsPoly::one() - EpsPoly::eps_pow(1));
        let mut map = BTreeMap::new();
        put_eps_rat(&mut map, "p", &one_minus);
        assert_eq!(map["p.num"], "[1, -1]");
        assert_eq!(map["p.den"], "[1]");
        let e = EpsPoly::eps_pow(1);
        let r = EpsRat::new(e.clone(), e.clone() + EpsPoly::eps_pow(2)).unwrap();
        put_eps_rat(&mut map, "q", &r);
        assert_eq!(map["q.limit"], "1/1");
        assert_eq!(map["q.num"], "[1]");
        assert_eq!(map["q.den"], "[1, 1]");
    }

    #[test]
    fn zero_sum_result_has_value() {
        let mut doc = ResultDocument::new(ResultMode::ZeroSum);
        doc.value = Some(EpsRat::from_poly(EpsPoly::zero()));
        let text = emit_result(&doc);
        assert!(text.contains("value.num = []\n"));
        assert!(text.contains("value.limit = 0/1\n"));
        assert!(text.contains("mode = zero-sum\n"));
        let map = read_result(&text).unwrap();
        assert_eq!(map["verify.pass"], "true");
        let keys: Vec<_> = map.keys().cloned().collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
    }
}
