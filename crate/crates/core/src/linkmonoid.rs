//! Isotopy classes of 1- and 2-string links as normal-form words.
//!
//! Color 1 is the free commutative monoid on prime knots. Color 2 is
//! `ℤ × (free commutative on central primes) × (free on noncentral primes)`:
//! a full-twist exponent, a sorted multiset of split and cable letters, and an
//! ordered body of noncentral letters. Central letters exist only for prime
//! knots; the split or cable of a composite knot is the product over its
//! prime factors.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinkError {
    #[error("color mismatch: {0} vs {1}")]
    ColorMismatch(usize, usize),
    #[error("expected a {expected}-string link, found a {found}-string link")]
    WrongColor { expected: usize, found: usize },
    #[error("unknown letter `{0}`")]
    UnknownLetter(String),
    #[error("alphabet line {line}: {message}")]
    Alphabet { line: usize, message: String },
    #[error("word is not in S2^0")]
    NotInS20,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CentralKind {
    SplitA,
    SplitB,
    Cable,
}

impl CentralKind {
    pub fn name(self) -> &'static str {
        match self {
            CentralKind::SplitA => "SplitA",
            CentralKind::SplitB => "SplitB",
            CentralKind::Cable => "Cable",
        }
    }
}

/// A split or cable letter built from a prime knot.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CentralLetter {
    pub kind: CentralKind,
    pub knot: String,
}

impl fmt::Display for CentralLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.kind.name(), self.knot)
    }
}

/// A noncentral prime 2-string link with its linking number.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Noncentral {
    pub name: String,
    pub linking: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LetterClass {
    Unit,
    Central,
    Noncentral,
}

/// Prime knots and noncentral 2-string links available for building words.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Alphabet {
    knots: Vec<String>,
    noncentral: BTreeMap<String, i64>,
}

fn valid_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && !matches!(s, "u" | "SplitA" | "SplitB" | "Cable")
}

impl Alphabet {
    pub fn new() -> Self {
        Self::default()
    }

    fn taken(&self, name: &str) -> bool {
        self.knots.iter().any(|k| k == name) || self.noncentral.contains_key(name)
    }

    pub fn add_knot(&mut self, name: &str) -> Result<(), String> {
        if !valid_name(name) {
            return Err(format!("invalid name `{name}`"));
        }
        if self.taken(name) {
            return Err(format!("duplicate name `{name}`"));
        }
        self.knots.push(name.to_string());
        Ok(())
    }

    pub fn add_noncentral(&mut self, name: &str, linking: i64) -> Result<(), String> {
        if !valid_name(name) {
            return Err(format!("invalid name `{name}`"));
        }
        if self.taken(name) {
            return Err(format!("duplicate name `{name}`"));
        }
        self.noncentral.insert(name.to_string(), linking);
        Ok(())
    }

    /// Line-oriented declarations; `;` also separates entries and `#` starts
    /// a comment.
    ///
    /// ```text
    /// knot trefoil
    /// noncentral X lk=0
    /// ```
    pub fn parse(text: &str) -> Result<Self, LinkError> {
        let mut a = Alphabet::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("");
            for entry in line.split(';') {
                let words: Vec<&str> = entry.split_whitespace().collect();
                let err = |message: String| LinkError::Alphabet { line: idx + 1, message };
                match words.as_slice() {
                    [] => {}
                    ["knot", name] => a.add_knot(name).map_err(err)?,
                    ["noncentral", name] => a.add_noncentral(name, 0).map_err(err)?,
                    ["noncentral", name, lk] => {
                        let value = lk
                            .strip_prefix("lk=")
                            .and_then(|v| v.parse::<i64>().ok())
                            .ok_or_else(|| err(format!("expected lk=<integer>, found `{lk}`")))?;
                        a.add_noncentral(name, value).map_err(err)?
                    }
                    _ => return Err(err(format!("cannot parse `{}`", entry.trim()))),
                }
            }
        }
        Ok(a)
    }

    pub fn knots(&self) -> &[String] {
        &self.knots
    }

    pub fn noncentral_letters(&self) -> Vec<Noncentral> {
        self.noncentral
            .iter()
            .map(|(name, &linking)| Noncentral {
                name: name.clone(),
                linking,
            })
            .collect()
    }

    pub fn has_knot(&self, name: &str) -> bool {
        self.knots.iter().any(|k| k == name)
    }

    pub fn knot(&self, name: &str) -> Result<String, LinkError> {
        if self.has_knot(name) {
            Ok(name.to_string())
        } else {
            Err(LinkError::UnknownLetter(name.to_string()))
        }
    }

    pub fn noncentral(&self, name: &str) -> Result<Noncentral, LinkError> {
        self.noncentral
            .get(name)
            .map(|&linking| Noncentral {
                name: name.to_string(),
                linking,
            })
            .ok_or_else(|| LinkError::UnknownLetter(name.to_string()))
    }

    pub fn central(&self, kind: CentralKind, knot: &str) -> Result<CentralLetter, LinkError> {
        Ok(CentralLetter {
            kind,
            knot: self.knot(knot)?,
        })
    }

    /// Classifies a letter given in DSL spelling: `u`, a knot, `SplitA(K)`,
    /// `SplitB(K)`, `Cable(K)` or a noncentral name.
    pub fn classify(&self, letter: &str) -> Result<LetterClass, LinkError> {
        let letter = letter.trim();
        if letter == "u" {
            return Ok(LetterClass::Unit);
        }
        for kind in [CentralKind::SplitA, CentralKind::SplitB, CentralKind::Cable] {
            if let Some(inner) = letter
                .strip_prefix(kind.name())
                .and_then(|r| r.strip_prefix('('))
                .and_then(|r| r.strip_suffix(')'))
            {
                self.knot(inner.trim())?;
                return Ok(LetterClass::Central);
            }
        }
        if self.has_knot(letter) {
            // the knot monoid is commutative
            Ok(LetterClass::Central)
        } else if self.noncentral.contains_key(letter) {
            Ok(LetterClass::Noncentral)
        } else {
            Err(LinkError::UnknownLetter(letter.to_string()))
        }
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "alphabet{{")?;
        for k in &self.knots {
            write!(f, " knot {k};")?;
        }
        for (name, lk) in &self.noncentral {
            write!(f, " noncentral {name} lk={lk};")?;
        }
        write!(f, " }}")
    }
}

/// A word in normal form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum LinkWord {
    One {
        knots: Vec<String>,
    },
    Two {
        twist: i64,
        central: Vec<CentralLetter>,
        body: Vec<Noncentral>,
    },
}

impl LinkWord {
    pub fn trivial(color: usize) -> Self {
        match color {
            1 => LinkWord::One { knots: Vec::new() },
            _ => LinkWord::Two {
                twist: 0,
                central: Vec::new(),
                body: Vec::new(),
            },
        }
    }

    pub fn knots(mut knots: Vec<String>) -> Self {
        knots.sort();
        LinkWord::One { knots }
    }

    pub fn two(twist: i64, mut central: Vec<CentralLetter>, body: Vec<Noncentral>) -> Self {
        central.sort();
        LinkWord::Two { twist, central, body }
    }

    pub fn twist(m: i64) -> Self {
        LinkWord::two(m, Vec::new(), Vec::new())
    }

    pub fn letter(x: Noncentral) -> Self {
        LinkWord::two(0, Vec::new(), vec![x])
    }

    pub fn central_letter(z: CentralLetter) -> Self {
        LinkWord::two(0, vec![z], Vec::new())
    }

    /// The split or cable of a knot word: one central letter per prime factor.
    pub fn central_of(kind: CentralKind, knot: &LinkWord) -> Result<Self, LinkError> {
        match knot {
            LinkWord::One { knots } => Ok(LinkWord::two(
                0,
                knots
                    .iter()
                    .map(|k| CentralLetter {
                        kind,
                        knot: k.clone(),
                    })
                    .collect(),
                Vec::new(),
            )),
            LinkWord::Two { .. } => Err(LinkError::WrongColor {
                expected: 1,
                found: 2,
            }),
        }
    }

    pub fn color(&self) -> usize {
        match self {
            LinkWord::One { .. } => 1,
            LinkWord::Two { .. } => 2,
        }
    }

    pub fn is_trivial(&self) -> bool {
        *self == LinkWord::trivial(self.color())
    }

    fn expect_two(&self) -> Result<(i64, &[CentralLetter], &[Noncentral]), LinkError> {
        match self {
            LinkWord::Two { twist, central, body } => Ok((*twist, central, body)),
            LinkWord::One { .. } => Err(LinkError::WrongColor {
                expected: 2,
                found: 1,
            }),
        }
    }
}

impl fmt::Display for LinkWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn list<T>(f: &mut fmt::Formatter<'_>, items: &[T], show: impl Fn(&T) -> String) -> fmt::Result {
            write!(f, "[")?;
            for (i, x) in items.iter().enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", show(x))?;
            }
            write!(f, "]")
        }
        match self {
            LinkWord::One { knots } => {
                write!(f, "link1{{ knots=")?;
                list(f, knots, |k| k.clone())?;
                write!(f, " }}")
            }
            LinkWord::Two { twist, central, body } => {
                write!(f, "link2{{ twist={twist}; central=")?;
                list(f, central, |z| z.to_string())?;
                write!(f, "; body=")?;
                list(f, body, |x| x.name.clone())?;
                write!(f, " }}")
            }
        }
    }
}

/// Connect sum: `a` first, then `b`.
pub fn mul(a: &LinkWord, b: &LinkWord) -> Result<LinkWord, LinkError> {
    match (a, b) {
        (LinkWord::One { knots: x }, LinkWord::One { knots: y }) => {
            Ok(LinkWord::knots(x.iter().chain(y).cloned().collect()))
        }
        (
            LinkWord::Two { twist: t1, central: c1, body: b1 },
            LinkWord::Two { twist: t2, central: c2, body: b2 },
        ) => Ok(LinkWord::two(
            t1 + t2,
            c1.iter().chain(c2).cloned().collect(),
            b1.iter().chain(b2).cloned().collect(),
        )),
        _ => Err(LinkError::ColorMismatch(a.color(), b.color())),
    }
}

/// Left-to-right product; the trivial word of `color` on an empty list.
pub fn product<'a>(words: impl IntoIterator<Item = &'a LinkWord>, color: usize) -> Result<LinkWord, LinkError> {
    words
        .into_iter()
        .try_fold(LinkWord::trivial(color), |acc, w| mul(&acc, w))
}

pub fn equals(a: &LinkWord, b: &LinkWord) -> Result<bool, LinkError> {
    if a.color() != b.color() {
        return Err(LinkError::ColorMismatch(a.color(), b.color()));
    }
    Ok(a == b)
}

/// Twist plus the linking numbers of the body; knots and central letters
/// contribute nothing. Color-1 words have linking number 0.
pub fn linking_number(w: &LinkWord) -> i64 {
    match w {
        LinkWord::One { .. } => 0,
        LinkWord::Two { twist, body, .. } => twist + body.iter().map(|x| x.linking).sum::<i64>(),
    }
}

pub fn add_twists(w: &LinkWord, m: i64) -> Result<LinkWord, LinkError> {
    let (twist, central, body) = w.expect_two()?;
    Ok(LinkWord::Two {
        twist: twist + m,
        central: central.to_vec(),
        body: body.to_vec(),
    })
}

/// Exactly one non-unit letter.
pub fn is_prime(w: &LinkWord) -> bool {
    match w {
        LinkWord::One { knots } => knots.len() == 1,
        LinkWord::Two { central, body, .. } => central.len() + body.len() == 1,
    }
}

/// Prime factors: the body in order, then the central letters. A nonzero
/// twist rides on the first factor, or stands alone when there is none.
pub fn decompose_primes(w: &LinkWord) -> Vec<LinkWord> {
    match w {
        LinkWord::One { knots } => knots.iter().map(|k| LinkWord::knots(vec![k.clone()])).collect(),
        LinkWord::Two { twist, central, body } => {
            let mut out: Vec<LinkWord> = body
                .iter()
                .map(|x| LinkWord::letter(x.clone()))
                .chain(central.iter().map(|z| LinkWord::central_letter(z.clone())))
                .collect();
            if *twist != 0 {
                match out.first_mut() {
                    Some(first) => *first = add_twists(first, *twist).expect("color 2"),
                    None => out.push(LinkWord::twist(*twist)),
                }
            }
            out
        }
    }
}

/// Image in the free quotient by the center.
pub fn mod_center(w: &LinkWord) -> Result<Vec<Noncentral>, LinkError> {
    Ok(w.expect_two()?.2.to_vec())
}

/// Every prime factor is noncentral. Twists are allowed, so that `S₂` is
/// `S₂⁰ × ℤ`.
pub fn in_s2(w: &LinkWord) -> Result<bool, LinkError> {
    Ok(w.expect_two()?.1.is_empty())
}

pub fn in_s2_0(w: &LinkWord) -> Result<bool, LinkError> {
    Ok(in_s2(w)? && linking_number(w) == 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alphabet() -> Alphabet {
        Alphabet::parse("# sample\nknot trefoil\nknot fig8\nnoncentral X lk=0\nnoncentral Y lk=2; noncentral W\n")
            .unwrap()
    }

    fn x(a: &Alphabet, n: &str) -> LinkWord {
        LinkWord::letter(a.noncentral(n).unwrap())
    }

    fn z(a: &Alphabet, kind: CentralKind, k: &str) -> LinkWord {
        LinkWord::central_letter(a.central(kind, k).unwrap())
    }

    fn m(words: &[&LinkWord]) -> LinkWord {
        product(words.iter().copied(), 2).unwrap()
    }

    #[test]
    fn alphabet_parsing() {
        let a = alphabet();
        assert_eq!(a.knots(), &["trefoil", "fig8"]);
        assert_eq!(a.noncentral("Y").unwrap().linking, 2);
        assert_eq!(a.noncentral("W").unwrap().linking, 0);
        assert!(Alphabet::parse("knot a\nknot a").is_err());
        assert!(Alphabet::parse("knot a\nnoncentral a").is_err());
        assert!(matches!(
            Alphabet::parse("knot a\nnoncentral X lk=two"),
            Err(LinkError::Alphabet { line: 2, .. })
        ));
        assert!(Alphabet::parse("strand a").is_err());
    }

    #[test]
    fn classification() {
        let a = alphabet();
        assert_eq!(a.classify("u").unwrap(), LetterClass::Unit);
        assert_eq!(a.classify("Cable(trefoil)").unwrap(), LetterClass::Central);
        assert_eq!(a.classify("SplitB(fig8)").unwrap(), LetterClass::Central);
        assert_eq!(a.classify("X").unwrap(), LetterClass::Noncentral);
        assert!(a.classify("Cable(X)").is_err());
        assert!(a.classify("Q").is_err());
        assert!(is_prime(&z(&a, CentralKind::Cable, "trefoil")));
        assert!(!is_prime(&m(&[&x(&a, "X"), &x(&a, "Y")])));
        assert!(!is_prime(&LinkWord::twist(3)));
        assert!(is_prime(&add_twists(&x(&a, "X"), 2).unwrap()));
    }

    #[test]
    fn mul_and_equals() {
        let a = alphabet();
        let (wx, wy) = (x(&a, "X"), x(&a, "Y"));
        let s = z(&a, CentralKind::SplitA, "trefoil");
        let triv = LinkWord::trivial(2);
        assert_eq!(mul(&triv, &wx).unwrap(), wx);
        assert_eq!(m(&[&wx, &s, &wy]), m(&[&s, &wx, &wy]));
        assert_ne!(m(&[&wx, &wy]), m(&[&wy, &wx]));
        let xyx = m(&[&wx, &wy, &wx]);
        assert_eq!(mod_center(&xyx).unwrap().len(), 3);
        assert_eq!(equals(&m(&[&LinkWord::twist(3), &wx]), &m(&[&wx, &LinkWord::twist(3)])), Ok(true));
        assert!(mul(&triv, &LinkWord::trivial(1)).is_err());
        assert!(equals(&triv, &LinkWord::trivial(1)).is_err());

        let k = LinkWord::knots(vec!["fig8".into(), "trefoil".into()]);
        let k2 = LinkWord::knots(vec!["trefoil".into(), "fig8".into()]);
        assert_eq!(k, k2);
    }

    #[test]
    fn linking_numbers() {
        let a = alphabet();
        assert_eq!(linking_number(&LinkWord::trivial(2)), 0);
        assert_eq!(linking_number(&LinkWord::twist(-4)), -4);
        let sc = m(&[&z(&a, CentralKind::SplitA, "trefoil"), &z(&a, CentralKind::Cable, "fig8")]);
        assert_eq!(linking_number(&sc), 0);
        assert_eq!(linking_number(&m(&[&x(&a, "Y"), &x(&a, "Y")])), 4);
        let w = add_twists(&LinkWord::trivial(2), 5).unwrap();
        assert_eq!(linking_number(&w), 5);
        assert_eq!(add_twists(&w, -5).unwrap(), LinkWord::trivial(2));
        assert!(add_twists(&LinkWord::trivial(1), 1).is_err());
    }

    #[test]
    fn decomposition() {
        let a = alphabet();
        assert!(decompose_primes(&LinkWord::trivial(2)).is_empty());
        let s = z(&a, CentralKind::SplitA, "trefoil");
        let w = m(&[&x(&a, "X"), &s, &x(&a, "Y")]);
        assert_eq!(decompose_primes(&w), vec![x(&a, "X"), x(&a, "Y"), s]);
        let t = LinkWord::twist(2);
        assert_eq!(decompose_primes(&t), vec![t.clone()]);
        let w = m(&[&w, &t]);
        assert_eq!(product(&decompose_primes(&w), 2).unwrap(), w);
    }

    #[test]
    fn composite_cable_splits_into_primes() {
        let k = LinkWord::knots(vec!["trefoil".into(), "fig8".into()]);
        let c = LinkWord::central_of(CentralKind::Cable, &k).unwrap();
        assert_eq!(decompose_primes(&c).len(), 2);
    }

    #[test]
    fn s2_membership() {
        let a = alphabet();
        let xy = m(&[&x(&a, "X"), &x(&a, "W")]);
        assert!(in_s2_0(&xy).unwrap());
        assert!(!in_s2(&z(&a, CentralKind::SplitA, "trefoil")).unwrap());
        let ux = m(&[&LinkWord::twist(1), &x(&a, "X")]);
        assert!(in_s2(&ux).unwrap());
        assert!(!in_s2_0(&ux).unwrap());
        let balanced = m(&[&LinkWord::twist(-2), &x(&a, "Y")]);
        assert!(in_s2_0(&balanced).unwrap());
    }

    #[test]
    fn display_forms() {
        let a = alphabet();
        let w = m(&[&LinkWord::twist(3), &z(&a, CentralKind::Cable, "fig8"), &z(&a, CentralKind::SplitA, "trefoil"), &x(&a, "X"), &x(&a, "Y")]);
        assert_eq!(w.to_string(), "link2{ twist=3; central=[SplitA(trefoil), Cable(fig8)]; body=[X, Y] }");
        assert_eq!(LinkWord::knots(vec!["trefoil".into()]).to_string(), "link1{ knots=[trefoil] }");
    }
}
