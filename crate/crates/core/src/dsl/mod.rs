//! The `.opd` scripting language: `let NAME = EXPR;` statements over
//! permutations, cubes, overlapping intervals, disk forests, infection
//! diagrams and link words.
//!
//! ```text
//! let a = alphabet{ knot trefoil; noncentral X lk=0; };
//! let f = forest{ root[ m1 m2 ] marked2=(m1,m2) };
//! let j = diagram{ sig=(2;2); forest=f;
//!     muffler{ time=(0,1); outer=root; holes=(m1,m2) }; order=perm[1] };
//! let w = act(j, [link2{ twist=0; central=[]; body=[X] }]);
//! ```
//!
//! Calls: `compose(J, [..])`, `permute(J, p)`, `act(J, [..])`,
//! `mul(a, b, ..)`, `twist(w, m)`, `identity(c)`, `stacking(e, c)`,
//! `pucks(o)`, `swapcheck(J, i, k, [..])`, `primes(w)`, `decompose(w)`.

pub mod lexer;
pub mod parser;

use std::collections::BTreeMap;
use std::fmt;

use crate::action::{self, ActionError};
use crate::cubes::{self, AffineMap1, CubesElement, CubesError, LittleCube};
use crate::diagrams::{self, DiagramError, InfectionDiagram, Muffler};
use crate::diskforest::{self, DiskForest, NodeId};
use crate::linkmonoid::{self, Alphabet, LinkError, LinkWord};
use crate::overlap::{self, OverlapElement, OverlapError};
use crate::perm::Permutation;

pub use parser::{parse, Script};
use parser::{AlphabetEntry, Expr, ExprKind, Interval, Named, NodeLit};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiagnosticKind {
    Syntax,
    Reference,
    /// A value that cannot be constructed (bad interval, malformed muffler).
    Invariant,
    /// A well-formed object breaking a law or constraint.
    Violation,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub pos: Pos,
    pub kind: DiagnosticKind,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            DiagnosticKind::Syntax => "syntax error",
            DiagnosticKind::Reference => "unresolved reference",
            DiagnosticKind::Invariant => "invalid value",
            DiagnosticKind::Violation => "violation",
        };
        write!(f, "{}:{}: {kind}: {}", self.pos.line, self.pos.col, self.message)
    }
}

impl std::error::Error for Diagnostic {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Value {
    Int(i128),
    Bool(bool),
    List(Vec<Value>),
    Perm(Permutation),
    Cube(LittleCube),
    Cubes(CubesElement),
    Overlap(OverlapElement),
    Forest(DiskForest),
    Diagram(InfectionDiagram),
    Link(LinkWord),
    Alphabet(Alphabet),
}

impl Value {
    pub fn type_name(&self) -> &'static str {
        match self {
            Value::Int(_) => "integer",
            Value::Bool(_) => "boolean",
            Value::List(_) => "list",
            Value::Perm(_) => "permutation",
            Value::Cube(_) => "cube",
            Value::Cubes(_) => "cubes element",
            Value::Overlap(_) => "overlap element",
            Value::Forest(_) => "forest",
            Value::Diagram(_) => "diagram",
            Value::Link(_) => "link",
            Value::Alphabet(_) => "alphabet",
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(n) => write!(f, "{n}"),
            Value::Bool(b) => write!(f, "{b}"),
            Value::List(xs) => {
                write!(f, "[")?;
                for (i, x) in xs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, "]")
            }
            Value::Perm(p) => write!(f, "{p}"),
            Value::Cube(c) => write!(f, "{c}"),
            Value::Cubes(e) => write!(f, "{e}"),
            Value::Overlap(e) => write!(f, "{e}"),
            Value::Forest(x) => write!(f, "{x}"),
            Value::Diagram(d) => write!(f, "{d}"),
            Value::Link(w) => write!(f, "{w}"),
            Value::Alphabet(a) => write!(f, "{a}"),
        }
    }
}

/// Bindings in declaration order.
#[derive(Debug, Clone, Default)]
pub struct Env {
    pub bindings: Vec<(String, Value)>,
    alphabet: Option<Alphabet>,
}

impl Env {
    pub fn alphabet(&self) -> Option<&Alphabet> {
        self.alphabet.as_ref()
    }

    pub fn get(&self, name: &str) -> Option<&Value> {
        self.bindings.iter().find(|(n, _)| n == name).map(|(_, v)| v)
    }

    /// The canonical script: one `let` per binding.
    pub fn print(&self) -> String {
        self.bindings
            .iter()
            .map(|(n, v)| format!("let {n} = {v};\n"))
            .collect()
    }
}

fn diag(pos: Pos, kind: DiagnosticKind, message: impl Into<String>) -> Diagnostic {
    Diagnostic {
        pos,
        kind,
        message: message.into(),
    }
}

fn invalid(pos: Pos, e: impl fmt::Display) -> Diagnostic {
    diag(pos, DiagnosticKind::Invariant, e.to_string())
}

fn from_diagram(pos: Pos, e: DiagramError) -> Diagnostic {
    match e {
        DiagramError::Constraint(v) => diag(pos, DiagnosticKind::Violation, format!("continuity constraint fails for {v}")),
        e => invalid(pos, e),
    }
}

fn from_cubes(pos: Pos, e: CubesError) -> Diagnostic {
    match e {
        CubesError::Overlap(i, k) => diag(pos, DiagnosticKind::Violation, format!("cubes {i} and {k} overlap")),
        CubesError::Diagram(d) => from_diagram(pos, d),
        e => invalid(pos, e),
    }
}

fn from_overlap(pos: Pos, e: OverlapError) -> Diagnostic {
    invalid(pos, e)
}

fn from_link(pos: Pos, e: LinkError) -> Diagnostic {
    match e {
        LinkError::UnknownLetter(_) => diag(pos, DiagnosticKind::Reference, e.to_string()),
        e => invalid(pos, e),
    }
}

fn from_action(pos: Pos, e: ActionError) -> Diagnostic {
    match e {
        ActionError::Diagram(d) => from_diagram(pos, d),
        ActionError::Link(l) => from_link(pos, l),
        ActionError::NotInS20 => diag(pos, DiagnosticKind::Violation, e.to_string()),
        e => invalid(pos, e),
    }
}

fn map1(pos: Pos, (lo, hi): &Interval) -> Result<AffineMap1, Diagnostic> {
    AffineMap1::from_interval(*lo, *hi).map_err(|e| invalid(pos, e))
}

/// Evaluates every statement in order. `alphabet` seeds the letters
/// available before any `alphabet{..}` declaration.
pub fn evaluate(script: &Script, alphabet: Option<Alphabet>) -> Result<Env, Diagnostic> {
    let mut env = Env {
        bindings: Vec::new(),
        alphabet,
    };
    for s in &script.stmts {
        let v = eval(&mut env, &s.expr)?;
        if let Value::Alphabet(a) = &v {
            env.alphabet = Some(a.clone());
        }
        env.bindings.push((s.name.clone(), v));
    }
    Ok(env)
}

/// Parses and evaluates in one step.
pub fn run_source(src: &str, alphabet: Option<Alphabet>) -> Result<Env, Diagnostic> {
    evaluate(&parse(src)?, alphabet)
}

fn expect_type<'a, T>(
    pos: Pos,
    v: &'a Value,
    wanted: &str,
    pick: impl Fn(&'a Value) -> Option<T>,
) -> Result<T, Diagnostic> {
    pick(v).ok_or_else(|| {
        invalid(pos, format!("expected {wanted}, found {}", v.type_name()))
    })
}

fn eval_perm(env: &mut Env, e: &Expr) -> Result<Permutation, Diagnostic> {
    let v = eval(env, e)?;
    expect_type(e.pos, &v, "a permutation", |v| match v {
        Value::Perm(p) => Some(p.clone()),
        _ => None,
    })
}

fn eval(env: &mut Env, e: &Expr) -> Result<Value, Diagnostic> {
    let pos = e.pos;
    Ok(match &e.kind {
        ExprKind::Int(n) => Value::Int(*n),
        ExprKind::Bool(b) => Value::Bool(*b),
        ExprKind::Ref(name) => env
            .get(name)
            .cloned()
            .ok_or_else(|| diag(pos, DiagnosticKind::Reference, format!("`{name}` is not defined")))?,
        ExprKind::List(xs) => Value::List(xs.iter().map(|x| eval(env, x)).collect::<Result<_, _>>()?),
        ExprKind::Perm(images) => {
            Value::Perm(Permutation::from_images(images.clone()).map_err(|e| invalid(pos, e))?)
        }
        ExprKind::Cube(axes) => Value::Cube(LittleCube::new(
            axes.iter().map(|a| map1(pos, a)).collect::<Result<_, _>>()?,
        )),
        ExprKind::Cubes { dim, cubes: items } => {
            let mut cs = Vec::new();
            for item in items {
                let v = eval(env, item)?;
                cs.push(expect_type(item.pos, &v, "a cube", |v| match v {
                    Value::Cube(c) => Some(c.clone()),
                    _ => None,
                })?);
            }
            Value::Cubes(CubesElement::new(*dim, cs).map_err(|e| from_cubes(pos, e))?)
        }
        ExprKind::Overlap { intervals, order } => {
            let ivs = intervals.iter().map(|a| map1(pos, a)).collect::<Result<_, _>>()?;
            let order = eval_perm(env, order)?;
            Value::Overlap(OverlapElement::new(ivs, order).map_err(|e| from_overlap(pos, e))?)
        }
        ExprKind::Forest { root, marked } => Value::Forest(build_forest(pos, root, marked)?),
        ExprKind::Diagram {
            inputs,
            output,
            forest,
            mufflers,
            order,
        } => {
            let fv = eval(env, forest)?;
            let forest_val = expect_type(forest.pos, &fv, "a forest", |v| match v {
                Value::Forest(f) => Some(f.clone()),
                _ => None,
            })?;
            let order = eval_perm(env, order)?;
            if inputs.len() != mufflers.len() {
                return Err(invalid(
                    pos,
                    format!("signature lists {} inputs but {} mufflers are given", inputs.len(), mufflers.len()),
                ));
            }
            let node = |n: &Named| -> Result<NodeId, Diagnostic> {
                forest_val
                    .node_by_name(&n.name)
                    .ok_or_else(|| diag(n.pos, DiagnosticKind::Reference, format!("no disk named `{}`", n.name)))
            };
            let mut ms = Vec::new();
            for (m, &color) in mufflers.iter().zip(inputs) {
                if m.holes.len() != color {
                    return Err(invalid(
                        m.pos,
                        format!("input color {color} needs {color} holes, found {}", m.holes.len()),
                    ));
                }
                ms.push(Muffler {
                    color,
                    time: map1(m.pos, &m.time)?,
                    outer: node(&m.outer)?,
                    holes: m.holes.iter().map(&node).collect::<Result<_, _>>()?,
                });
            }
            Value::Diagram(InfectionDiagram::new(*output, forest_val, ms, order).map_err(|e| from_diagram(pos, e))?)
        }
        ExprKind::Link1(knots) => {
            let a = alphabet(env, pos)?;
            let ks = knots
                .iter()
                .map(|k| a.knot(&k.name).map_err(|e| from_link(k.pos, e)))
                .collect::<Result<_, _>>()?;
            Value::Link(LinkWord::knots(ks))
        }
        ExprKind::Link2 { twist, central, body } => {
            let a = alphabet(env, pos)?;
            let zs = central
                .iter()
                .map(|(kind, k)| a.central(*kind, &k.name).map_err(|e| from_link(k.pos, e)))
                .collect::<Result<_, _>>()?;
            let xs = body
                .iter()
                .map(|x| a.noncentral(&x.name).map_err(|e| from_link(x.pos, e)))
                .collect::<Result<_, _>>()?;
            Value::Link(LinkWord::two(*twist, zs, xs))
        }
        ExprKind::Alphabet(entries) => {
            let mut a = Alphabet::new();
            for entry in entries {
                match entry {
                    AlphabetEntry::Knot(n) => a.add_knot(&n.name).map_err(|m| invalid(n.pos, m))?,
                    AlphabetEntry::Noncentral(n, lk) => a.add_noncentral(&n.name, *lk).map_err(|m| invalid(n.pos, m))?,
                }
            }
            Value::Alphabet(a)
        }
        ExprKind::Call { name, args } => {
            let vals = args.iter().map(|x| eval(env, x)).collect::<Result<Vec<_>, _>>()?;
            call(pos, name, &vals)?
        }
    })
}

fn alphabet(env: &Env, pos: Pos) -> Result<Alphabet, Diagnostic> {
    env.alphabet
        .clone()
        .ok_or_else(|| diag(pos, DiagnosticKind::Reference, "no alphabet declared before this link"))
}

fn build_forest(pos: Pos, root: &NodeLit, marked: &[(usize, Vec<Named>)]) -> Result<DiskForest, Diagnostic> {
    let mut parent = Vec::new();
    let mut names: Vec<String> = Vec::new();
    let mut index = BTreeMap::new();
    let mut stack = vec![(root, None)];
    while let Some((n, p)) = stack.pop() {
        let id = parent.len();
        if index.insert(n.name.name.clone(), id).is_some() {
            return Err(invalid(n.name.pos, format!("duplicate disk name `{}`", n.name.name)));
        }
        parent.push(p);
        names.push(n.name.name.clone());
        stack.extend(n.children.iter().rev().map(|c| (c, Some(id))));
    }
    let mut marks = BTreeMap::new();
    for (color, disks) in marked {
        let ids = disks
            .iter()
            .map(|d| {
                index
                    .get(&d.name)
                    .copied()
                    .ok_or_else(|| diag(d.pos, DiagnosticKind::Reference, format!("no disk named `{}`", d.name)))
            })
            .collect::<Result<_, _>>()?;
        if marks.insert(*color, ids).is_some() {
            return Err(invalid(pos, format!("marked{color} given twice")));
        }
    }
    let f = DiskForest::from_parts(parent, names, marks);
    diskforest::validate(&f).map_err(|e| invalid(pos, e))?;
    Ok(f)
}

fn list_of<'a, T>(
    pos: Pos,
    v: &'a Value,
    wanted: &str,
    pick: impl Fn(&'a Value) -> Option<T>,
) -> Result<Vec<T>, Diagnostic> {
    match v {
        Value::List(xs) => xs.iter().map(|x| expect_type(pos, x, wanted, &pick)).collect(),
        _ => Err(invalid(pos, format!("expected a list, found {}", v.type_name()))),
    }
}

fn as_diagram(v: &Value) -> Option<&InfectionDiagram> {
    match v {
        Value::Diagram(d) => Some(d),
        _ => None,
    }
}

fn as_link(v: &Value) -> Option<LinkWord> {
    match v {
        Value::Link(w) => Some(w.clone()),
        _ => None,
    }
}

fn as_index(v: &Value) -> Option<usize> {
    match v {
        Value::Int(n) => usize::try_from(*n).ok(),
        _ => None,
    }
}

fn call(pos: Pos, name: &str, args: &[Value]) -> Result<Value, Diagnostic> {
    let arity = |n: usize| -> Result<(), Diagnostic> {
        if args.len() == n {
            Ok(())
        } else {
            Err(invalid(pos, format!("`{name}` takes {n} arguments, found {}", args.len())))
        }
    };
    Ok(match name {
        "compose" => {
            arity(2)?;
            match &args[0] {
                Value::Diagram(j) => {
                    let inners: Vec<InfectionDiagram> = list_of(pos, &args[1], "a diagram", |v| as_diagram(v).cloned())?;
                    Value::Diagram(diagrams::compose(j, &inners).map_err(|e| from_diagram(pos, e))?)
                }
                Value::Cubes(j) => {
                    let inners = list_of(pos, &args[1], "a cubes element", |v| match v {
                        Value::Cubes(e) => Some(e.clone()),
                        _ => None,
                    })?;
                    Value::Cubes(cubes::cubes_compose(j, &inners).map_err(|e| from_cubes(pos, e))?)
                }
                Value::Overlap(j) => {
                    let inners = list_of(pos, &args[1], "an overlap element", |v| match v {
                        Value::Overlap(e) => Some(e.clone()),
                        _ => None,
                    })?;
                    Value::Overlap(overlap::compose_overlap(j, &inners).map_err(|e| from_overlap(pos, e))?)
                }
                v => return Err(invalid(pos, format!("cannot compose a {}", v.type_name()))),
            }
        }
        "permute" => {
            arity(2)?;
            let p = expect_type(pos, &args[1], "a permutation", |v| match v {
                Value::Perm(p) => Some(p.clone()),
                _ => None,
            })?;
            match &args[0] {
                Value::Diagram(d) => Value::Diagram(diagrams::act_symmetric(d, &p).map_err(|e| from_diagram(pos, e))?),
                Value::Cubes(e) => Value::Cubes(e.act(&p).map_err(|e| invalid(pos, e))?),
                Value::Overlap(e) => Value::Overlap(e.act(&p).map_err(|e| from_overlap(pos, e))?),
                v => return Err(invalid(pos, format!("cannot permute a {}", v.type_name()))),
            }
        }
        "act" => {
            arity(2)?;
            let d = expect_type(pos, &args[0], "a diagram", as_diagram)?;
            let links = list_of(pos, &args[1], "a link", as_link)?;
            Value::Link(action::act(d, &links).map_err(|e| from_action(pos, e))?)
        }
        "mul" => {
            let words = args
                .iter()
                .map(|v| expect_type(pos, v, "a link", as_link))
                .collect::<Result<Vec<_>, _>>()?;
            let first = words.first().ok_or_else(|| invalid(pos, "`mul` needs at least one link"))?;
            Value::Link(linkmonoid::product(&words, first.color()).map_err(|e| from_link(pos, e))?)
        }
        "twist" => {
            arity(2)?;
            let w = expect_type(pos, &args[0], "a link", as_link)?;
            let m = expect_type(pos, &args[1], "an integer", |v| match v {
                Value::Int(n) => i64::try_from(*n).ok(),
                _ => None,
            })?;
            Value::Link(linkmonoid::add_twists(&w, m).map_err(|e| from_link(pos, e))?)
        }
        "identity" => {
            arity(1)?;
            let c = expect_type(pos, &args[0], "a color", as_index).and_then(|c| {
                if c >= 1 {
                    Ok(c)
                } else {
                    Err(invalid(pos, "colors start at 1"))
                }
            })?;
            Value::Diagram(diagrams::identity_diagram(c))
        }
        "stacking" => {
            arity(2)?;
            let e = expect_type(pos, &args[0], "a cubes element", |v| match v {
                Value::Cubes(e) => Some(e.clone()),
                _ => None,
            })?;
            let c = expect_type(pos, &args[1], "a color", as_index).and_then(|c| {
                if c >= 1 {
                    Ok(c)
                } else {
                    Err(invalid(pos, "colors start at 1"))
                }
            })?;
            Value::Diagram(cubes::c1_to_stacking(&e, c).map_err(|e| from_cubes(pos, e))?)
        }
        "pucks" => {
            arity(1)?;
            let e = expect_type(pos, &args[0], "an overlap element", |v| match v {
                Value::Overlap(e) => Some(e.clone()),
                _ => None,
            })?;
            Value::Diagram(InfectionDiagram::from_overlap(&e).map_err(|e| from_diagram(pos, e))?)
        }
        "swapcheck" => {
            arity(4)?;
            let d = expect_type(pos, &args[0], "a diagram", as_diagram)?;
            let i = expect_type(pos, &args[1], "a muffler index", as_index)?;
            let k = expect_type(pos, &args[2], "a muffler index", as_index)?;
            let links = list_of(pos, &args[3], "a link", as_link)?;
            Value::Bool(action::verify_comm_swap(d, i, k, &links).map_err(|e| from_action(pos, e))?)
        }
        "primes" => {
            arity(1)?;
            let w = expect_type(pos, &args[0], "a link", as_link)?;
            Value::List(linkmonoid::decompose_primes(&w).into_iter().map(Value::Link).collect())
        }
        "decompose" => {
            arity(1)?;
            let w = expect_type(pos, &args[0], "a link", as_link)?;
            let (d, factors) = action::decompose_s2(&w).map_err(|e| from_action(pos, e))?;
            Value::List(vec![
                Value::Diagram(d),
                Value::List(factors.into_iter().map(Value::Link).collect()),
            ])
        }
        _ => return Err(diag(pos, DiagnosticKind::Reference, format!("unknown function `{name}`"))),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_diagram_round_trips() {
        let env = run_source("let j = identity(2);", None).unwrap();
        let printed = env.print();
        assert_eq!(
            printed,
            "let j = diagram{ sig=(2;2); forest=forest{ root[ m1 m2 ] marked2=(m1,m2) }; \
             muffler{ time=(0,1); outer=root; holes=(m1,m2) }; order=perm[1] };\n"
        );
        assert_eq!(run_source(&printed, None).unwrap().print(), printed);
    }

    #[test]
    fn violations_are_classified() {
        let src = "let f = forest{ root[ m1 m2 ] marked2=(m1,m2) };
let d = diagram{ sig=(2,2;2); forest=f;
  muffler{ time=(0,3/4); outer=root; holes=(m1,m2) };
  muffler{ time=(1/4,1); outer=root; holes=(m1,m2) }; order=perm[1,2] };";
        let err = run_source(src, None).unwrap_err();
        assert_eq!(err.kind, DiagnosticKind::Violation);
        assert!(err.message.contains("mufflers (1, 2)"), "{}", err.message);
        assert_eq!(err.pos.line, 2);

        let err = run_source("let c = cube[(1,0)];", None).unwrap_err();
        assert_eq!(err.kind, DiagnosticKind::Invariant);
    }

    #[test]
    fn links_need_an_alphabet() {
        let err = run_source("let w = link2{ twist=0; central=[]; body=[X] };", None).unwrap_err();
        assert_eq!(err.kind, DiagnosticKind::Reference);
        let src = "let a = alphabet{ noncentral X lk=1; };
let w = link2{ twist=0; central=[]; body=[X] };
let v = mul(w, w, twist(w, -3));";
        let env = run_source(src, None).unwrap();
        assert_eq!(env.get("v").unwrap().to_string(), "link2{ twist=-3; central=[]; body=[X, X, X] }");
    }

    #[test]
    fn calls_check_their_arguments() {
        let err = run_source("let j = identity(2); let x = act(j, [1]);", None).unwrap_err();
        assert!(err.message.contains("expected a link"));
        let err = run_source("let x = frobnicate(1);", None).unwrap_err();
        assert_eq!(err.kind, DiagnosticKind::Reference);
    }
}
