//! Recursive-descent parser. Every construct is selected by its leading
//! keyword, so one token of lookahead suffices.

use std::collections::BTreeSet;

use super::lexer::{lex, Tok, Token};
use super::{Diagnostic, DiagnosticKind, Pos};
use crate::linkmonoid::CentralKind;
use crate::rational::{rat, Rational};

#[derive(Debug, Clone)]
pub struct Script {
    pub stmts: Vec<Stmt>,
}

#[derive(Debug, Clone)]
pub struct Stmt {
    pub name: String,
    pub pos: Pos,
    pub expr: Expr,
}

#[derive(Debug, Clone)]
pub struct Expr {
    pub pos: Pos,
    pub kind: ExprKind,
}

pub type Interval = (Rational, Rational);

#[derive(Debug, Clone)]
pub struct Named {
    pub name: String,
    pub pos: Pos,
}

#[derive(Debug, Clone)]
pub struct NodeLit {
    pub name: Named,
    pub children: Vec<NodeLit>,
}

#[derive(Debug, Clone)]
pub struct MufflerLit {
    pub pos: Pos,
    pub time: Interval,
    pub outer: Named,
    pub holes: Vec<Named>,
}

#[derive(Debug, Clone)]
pub enum AlphabetEntry {
    Knot(Named),
    Noncentral(Named, i64),
}

#[derive(Debug, Clone)]
pub enum ExprKind {
    Int(i128),
    Bool(bool),
    Ref(String),
    List(Vec<Expr>),
    Perm(Vec<usize>),
    Cube(Vec<Interval>),
    Cubes {
        dim: usize,
        cubes: Vec<Expr>,
    },
    Overlap {
        intervals: Vec<Interval>,
        order: Box<Expr>,
    },
    Forest {
        root: NodeLit,
        marked: Vec<(usize, Vec<Named>)>,
    },
    Diagram {
        inputs: Vec<usize>,
        output: usize,
        forest: Box<Expr>,
        mufflers: Vec<MufflerLit>,
        order: Box<Expr>,
    },
    Link1(Vec<Named>),
    Link2 {
        twist: i64,
        central: Vec<(CentralKind, Named)>,
        body: Vec<Named>,
    },
    Alphabet(Vec<AlphabetEntry>),
    Call {
        name: String,
        args: Vec<Expr>,
    },
}

struct Parser {
    toks: Vec<Token>,
    at: usize,
}

fn syntax(pos: Pos, message: impl Into<String>) -> Diagnostic {
    Diagnostic {
        pos,
        kind: DiagnosticKind::Syntax,
        message: message.into(),
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Int(n) => format!("`{n}`"),
        Tok::Sym(c) => format!("`{c}`"),
        Tok::Eof => "end of input".into(),
    }
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].tok
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].pos
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn unexpected<T>(&self, wanted: &str) -> Result<T, Diagnostic> {
        Err(syntax(
            self.pos(),
            format!("expected {wanted}, found {}", describe(self.peek())),
        ))
    }

    fn is_sym(&self, c: char) -> bool {
        *self.peek() == Tok::Sym(c)
    }

    fn sym(&mut self, c: char) -> Result<(), Diagnostic> {
        if self.is_sym(c) {
            self.bump();
            Ok(())
        } else {
            self.unexpected(&format!("`{c}`"))
        }
    }

    fn ident(&mut self) -> Result<Named, Diagnostic> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Ident(name) => {
                self.bump();
                Ok(Named { name, pos })
            }
            _ => self.unexpected("a name"),
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<(), Diagnostic> {
        match self.peek() {
            Tok::Ident(s) if s == kw => {
                self.bump();
                Ok(())
            }
            _ => self.unexpected(&format!("`{kw}`")),
        }
    }

    /// `kw =`
    fn field(&mut self, kw: &str) -> Result<(), Diagnostic> {
        self.keyword(kw)?;
        self.sym('=')
    }

    fn int(&mut self) -> Result<i128, Diagnostic> {
        let neg = self.is_sym('-');
        if neg {
            self.bump();
        }
        match *self.peek() {
            Tok::Int(n) => {
                self.bump();
                Ok(if neg { -n } else { n })
            }
            _ => self.unexpected("an integer"),
        }
    }

    fn small(&mut self) -> Result<usize, Diagnostic> {
        let pos = self.pos();
        let n = self.int()?;
        usize::try_from(n)
            .ok()
            .filter(|&n| n <= 1 << 20)
            .ok_or_else(|| syntax(pos, format!("expected a small non-negative integer, found {n}")))
    }

    fn i64(&mut self) -> Result<i64, Diagnostic> {
        let pos = self.pos();
        let n = self.int()?;
        i64::try_from(n).map_err(|_| syntax(pos, format!("integer {n} is out of range")))
    }

    fn rational(&mut self) -> Result<Rational, Diagnostic> {
        let pos = self.pos();
        let num = self.int()?;
        if !self.is_sym('/') {
            return Ok(rat(num, 1));
        }
        self.bump();
        let dpos = self.pos();
        let den = self.int()?;
        if den == 0 {
            return Err(syntax(dpos, format!("zero denominator in `{num}/0`")));
        }
        if den < 0 {
            return Err(syntax(pos, "denominators must be positive"));
        }
        Ok(rat(num, den))
    }

    fn interval(&mut self) -> Result<Interval, Diagnostic> {
        self.sym('(')?;
        let lo = self.rational()?;
        self.sym(',')?;
        let hi = self.rational()?;
        self.sym(')')?;
        Ok((lo, hi))
    }

    /// `open item (, item)* close`, possibly empty.
    fn seq<T>(
        &mut self,
        open: char,
        close: char,
        mut item: impl FnMut(&mut Self) -> Result<T, Diagnostic>,
    ) -> Result<Vec<T>, Diagnostic> {
        self.sym(open)?;
        let mut out = Vec::new();
        if self.is_sym(close) {
            self.bump();
            return Ok(out);
        }
        loop {
            out.push(item(self)?);
            if self.is_sym(',') {
                self.bump();
            } else {
                self.sym(close)?;
                return Ok(out);
            }
        }
    }

    fn script(&mut self) -> Result<Script, Diagnostic> {
        let mut stmts = Vec::new();
        while *self.peek() != Tok::Eof {
            let pos = self.pos();
            self.keyword("let")?;
            let name = self.ident()?;
            self.sym('=')?;
            let expr = self.expr()?;
            self.sym(';')?;
            stmts.push(Stmt {
                name: name.name,
                pos,
                expr,
            });
        }
        Ok(Script { stmts })
    }

    fn expr(&mut self) -> Result<Expr, Diagnostic> {
        let pos = self.pos();
        let kind = match self.peek().clone() {
            Tok::Int(_) | Tok::Sym('-') => ExprKind::Int(self.int()?),
            Tok::Sym('[') => ExprKind::List(self.seq('[', ']', |p| p.expr())?),
            Tok::Ident(word) => {
                self.bump();
                match word.as_str() {
                    "true" => ExprKind::Bool(true),
                    "false" => ExprKind::Bool(false),
                    "perm" => ExprKind::Perm(self.seq('[', ']', |p| p.small())?),
                    "cube" => ExprKind::Cube(self.seq('[', ']', |p| p.interval())?),
                    "cubes" => self.cubes()?,
                    "overlap" => self.overlap()?,
                    "forest" => self.forest()?,
                    "diagram" => self.diagram()?,
                    "link1" => self.link1()?,
                    "link2" => self.link2()?,
                    "alphabet" => self.alphabet()?,
                    _ if self.is_sym('(') => ExprKind::Call {
                        name: word,
                        args: self.seq('(', ')', |p| p.expr())?,
                    },
                    _ => ExprKind::Ref(word),
                }
            }
            _ => return self.unexpected("an expression"),
        };
        Ok(Expr { pos, kind })
    }

    fn cubes(&mut self) -> Result<ExprKind, Diagnostic> {
        self.sym('{')?;
        self.field("dim")?;
        let dim = self.small()?;
        self.sym(';')?;
        self.field("cubes")?;
        let cubes = self.seq('[', ']', |p| p.expr())?;
        self.sym('}')?;
        Ok(ExprKind::Cubes { dim, cubes })
    }

    fn overlap(&mut self) -> Result<ExprKind, Diagnostic> {
        self.sym('{')?;
        self.field("intervals")?;
        let intervals = self.seq('[', ']', |p| p.interval())?;
        self.sym(';')?;
        self.field("order")?;
        let order = Box::new(self.expr()?);
        self.sym('}')?;
        Ok(ExprKind::Overlap { intervals, order })
    }

    fn node(&mut self) -> Result<NodeLit, Diagnostic> {
        let name = self.ident()?;
        let mut children = Vec::new();
        if self.is_sym('[') {
            self.bump();
            while !self.is_sym(']') {
                children.push(self.node()?);
            }
            self.bump();
        }
        Ok(NodeLit { name, children })
    }

    fn forest(&mut self) -> Result<ExprKind, Diagnostic> {
        self.sym('{')?;
        let root = self.node()?;
        let mut marked = Vec::new();
        while let Tok::Ident(w) = self.peek().clone() {
            let pos = self.pos();
            let color = w
                .strip_prefix("marked")
                .and_then(|c| c.parse::<usize>().ok())
                .filter(|&c| c >= 2)
                .ok_or_else(|| syntax(pos, format!("expected `markedC` with C >= 2, found `{w}`")))?;
            self.bump();
            self.sym('=')?;
            let disks = self.seq('(', ')', |p| p.ident())?;
            marked.push((color, disks));
        }
        self.sym('}')?;
        Ok(ExprKind::Forest { root, marked })
    }

    fn diagram(&mut self) -> Result<ExprKind, Diagnostic> {
        self.sym('{')?;
        self.field("sig")?;
        self.sym('(')?;
        let mut inputs = Vec::new();
        while !self.is_sym(';') {
            inputs.push(self.small()?);
            if self.is_sym(',') {
                self.bump();
            } else if !self.is_sym(';') {
                return self.unexpected("`,` or `;`");
            }
        }
        self.bump();
        let output = self.small()?;
        self.sym(')')?;
        self.sym(';')?;
        self.field("forest")?;
        let forest = Box::new(self.expr()?);
        self.sym(';')?;
        let mut mufflers = Vec::new();
        while matches!(self.peek(), Tok::Ident(w) if w == "muffler") {
            let pos = self.pos();
            self.bump();
            self.sym('{')?;
            self.field("time")?;
            let time = self.interval()?;
            self.sym(';')?;
            self.field("outer")?;
            let outer = self.ident()?;
            self.sym(';')?;
            self.field("holes")?;
            let holes = self.seq('(', ')', |p| p.ident())?;
            self.sym('}')?;
            self.sym(';')?;
            mufflers.push(MufflerLit {
                pos,
                time,
                outer,
                holes,
            });
        }
        self.field("order")?;
        let order = Box::new(self.expr()?);
        self.sym('}')?;
        Ok(ExprKind::Diagram {
            inputs,
            output,
            forest,
            mufflers,
            order,
        })
    }

    fn link1(&mut self) -> Result<ExprKind, Diagnostic> {
        self.sym('{')?;
        self.field("knots")?;
        let knots = self.seq('[', ']', |p| p.ident())?;
        self.sym('}')?;
        Ok(ExprKind::Link1(knots))
    }

    fn central(&mut self) -> Result<(CentralKind, Named), Diagnostic> {
        let head = self.ident()?;
        let kind = match head.name.as_str() {
            "SplitA" => CentralKind::SplitA,
            "SplitB" => CentralKind::SplitB,
            "Cable" => CentralKind::Cable,
            other => {
                return Err(syntax(
                    head.pos,
                    format!("expected SplitA, SplitB or Cable, found `{other}`"),
                ))
            }
        };
        self.sym('(')?;
        let knot = self.ident()?;
        self.sym(')')?;
        Ok((kind, knot))
    }

    fn link2(&mut self) -> Result<ExprKind, Diagnostic> {
        self.sym('{')?;
        self.field("twist")?;
        let twist = self.i64()?;
        self.sym(';')?;
        self.field("central")?;
        let central = self.seq('[', ']', |p| p.central())?;
        self.sym(';')?;
        self.field("body")?;
        let body = self.seq('[', ']', |p| p.ident())?;
        self.sym('}')?;
        Ok(ExprKind::Link2 { twist, central, body })
    }

    fn alphabet(&mut self) -> Result<ExprKind, Diagnostic> {
        self.sym('{')?;
        let mut entries = Vec::new();
        while !self.is_sym('}') {
            let head = self.ident()?;
            match head.name.as_str() {
                "knot" => entries.push(AlphabetEntry::Knot(self.ident()?)),
                "noncentral" => {
                    let name = self.ident()?;
                    let lk = if matches!(self.peek(), Tok::Ident(w) if w == "lk") {
                        self.field("lk")?;
                        self.i64()?
                    } else {
                        0
                    };
                    entries.push(AlphabetEntry::Noncentral(name, lk));
                }
                other => {
                    return Err(syntax(
                        head.pos,
                        format!("expected `knot` or `noncentral`, found `{other}`"),
                    ))
                }
            }
            self.sym(';')?;
        }
        self.bump();
        Ok(ExprKind::Alphabet(entries))
    }
}

fn check_refs(e: &Expr, bound: &BTreeSet<String>) -> Result<(), Diagnostic> {
    let unresolved = |name: &str| Diagnostic {
        pos: e.pos,
        kind: DiagnosticKind::Reference,
        message: format!("`{name}` is not defined before this point"),
    };
    match &e.kind {
        ExprKind::Ref(name) if !bound.contains(name) => Err(unresolved(name)),
        ExprKind::List(xs) | ExprKind::Call { args: xs, .. } | ExprKind::Cubes { cubes: xs, .. } => {
            xs.iter().try_for_each(|x| check_refs(x, bound))
        }
        ExprKind::Overlap { order, .. } => check_refs(order, bound),
        ExprKind::Diagram { forest, order, .. } => {
            check_refs(forest, bound)?;
            check_refs(order, bound)
        }
        _ => Ok(()),
    }
}

/// Parses a script and checks that every name is bound before use.
pub fn parse(src: &str) -> Result<Script, Diagnostic> {
    let mut p = Parser { toks: lex(src)?, at: 0 };
    let script = p.script()?;
    let mut bound = BTreeSet::new();
    for s in &script.stmts {
        check_refs(&s.expr, &bound)?;
        if !bound.insert(s.name.clone()) {
            return Err(Diagnostic {
                pos: s.pos,
                kind: DiagnosticKind::Reference,
                message: format!("`{}` is already defined", s.name),
            });
        }
    }
    Ok(script)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_script() {
        assert!(parse("").unwrap().stmts.is_empty());
        assert!(parse("  # only a comment\n").unwrap().stmts.is_empty());
    }

    #[test]
    fn zero_denominator() {
        let err = parse("let c = cube[(0,1/0)];").unwrap_err();
        assert_eq!((err.pos.line, err.pos.col), (1, 19));
        assert!(err.message.contains("zero denominator"));
    }

    #[test]
    fn unresolved_and_duplicate_names() {
        let err = parse("let a = compose(b, []);").unwrap_err();
        assert_eq!(err.kind, DiagnosticKind::Reference);
        assert_eq!(err.pos.col, 17);
        let err = parse("let a = 1;\nlet a = 2;").unwrap_err();
        assert_eq!(err.pos.line, 2);
    }

    #[test]
    fn parses_every_literal() {
        let src = "let p = perm[2,3,1];
let c = cubes{ dim=2; cubes=[cube[(0,1/2),(0,1)], cube[(1/2,1),(0,1)]] };
let o = overlap{ intervals=[(0,3/4), (1/4,1)]; order=perm[2,1] };
let f = forest{ root[ m1 m2 d1[ d2 ] ] marked2=(m1,m2) };
let d = diagram{ sig=(;2); forest=f; order=perm[] };
let a = alphabet{ knot trefoil; noncentral X lk=-1; noncentral Y; };
let w = link2{ twist=-3; central=[Cable(trefoil)]; body=[X, Y] };
let k = link1{ knots=[trefoil] };
let j = compose(d, [w, -2, true]);";
        let s = parse(src).unwrap();
        assert_eq!(s.stmts.len(), 9);
        assert!(matches!(s.stmts[4].expr.kind, ExprKind::Diagram { ref inputs, output: 2, .. } if inputs.is_empty()));
        assert!(matches!(s.stmts[6].expr.kind, ExprKind::Link2 { twist: -3, .. }));
    }

    #[test]
    fn reports_expected_token() {
        let err = parse("let p = perm[1 2];").unwrap_err();
        assert!(err.message.contains("expected `]`"), "{}", err.message);
        assert_eq!(err.pos.col, 16);
    }
}
