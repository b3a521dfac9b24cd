//! Words in a finitely generated free group.
//!
//! A [`Word`] is a raw letter sequence over an [`Alphabet`]; it may contain
//! cancelling adjacent letters. [`ReducedWord`] and [`CyclicWord`] are the
//! freely reduced and cyclically reduced refinements. Cyclic words compare
//! equal when they are rotations of each other; the canonical representative
//! is the lexicographically least rotation under the letter order
//! `x < x^-1 < y < y^-1 < ...`.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use thiserror::Error;

/// Sign of a letter. `Plus` sorts before `Minus`, which together with the
/// generator index gives the total letter order used for canonical rotations.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

/// A single generator or inverse generator occurrence.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Letter {
    gen: u16,
    sign: Sign,
}

impl Letter {
    pub fn new(gen: usize, sign: Sign) -> Letter {
        Letter { gen: gen as u16, sign }
    }

    pub fn positive(gen: usize) -> Letter {
        Letter::new(gen, Sign::Plus)
    }

    pub fn negative(gen: usize) -> Letter {
        Letter::new(gen, Sign::Minus)
    }

    pub fn gen(self) -> usize {
        self.gen as usize
    }

    pub fn sign(self) -> Sign {
        self.sign
    }

    pub fn inverse(self) -> Letter {
        Letter { gen: self.gen, sign: self.sign.flip() }
    }

    /// True when `self` and `other` cancel as neighbours.
    pub fn cancels(self, other: Letter) -> bool {
        self.gen == other.gen && self.sign != other.sign
    }
}

/// Errors from building an alphabet.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum AlphabetError {
    #[error("invalid generator name {0:?}: expected a lowercase letter followed by digits")]
    InvalidName(String),
    #[error("duplicate generator name {0:?}")]
    DuplicateName(String),
    #[error("alphabet must have at least one generator")]
    Empty,
}

fn valid_generator_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_lowercase() => chars.all(|c| c.is_ascii_digit()),
        _ => false,
    }
}

/// An ordered list of generator names. Cheap to clone; words hold one.
#[derive(Clone, Debug)]
pub struct Alphabet {
    names: Arc<Vec<String>>,
}

impl PartialEq for Alphabet {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.names, &other.names) || self.names == other.names
    }
}

impl Eq for Alphabet {}

impl Alphabet {
    pub fn new<S: Into<String>, I: IntoIterator<Item = S>>(names: I) -> Result<Alphabet, AlphabetError> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(AlphabetError::Empty);
        }
        for (i, name) in names.iter().enumerate() {
            if !valid_generator_name(name) {
                return Err(AlphabetError::InvalidName(name.clone()));
            }
            if names[..i].contains(name) {
                return Err(AlphabetError::DuplicateName(name.clone()));
            }
        }
        Ok(Alphabet { names: Arc::new(names) })
    }

    /// The `n` default generator names: `x`, `y`, `z` for `n <= 3`, and
    /// `x1, ..., xn` beyond that.
    pub fn with_rank(n: usize) -> Alphabet {
        let names: Vec<String> = if n <= 3 {
            ["x", "y", "z"][..n].iter().map(|s| s.to_string()).collect()
        } else {
            (1..=n).map(|i| format!("x{i}")).collect()
        };
        Alphabet::new(names).expect("default names are valid")
    }

    pub fn rank(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, gen: usize) -> &str {
        &self.names[gen]
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Parses a word expression over this alphabet. Unknown generator names
    /// are an error.
    pub fn parse(&self, text: &str) -> Result<Word, ParseError> {
        parse::parse(text, Some(self))
    }

    pub fn empty_word(&self) -> Word {
        Word { alphabet: self.clone(), letters: Vec::new() }
    }

    /// Builds a word directly from letters; indices must be in range.
    pub fn word_from_letters(&self, letters: Vec<Letter>) -> Word {
        for l in &letters {
            assert!(l.gen() < self.rank(), "letter generator index out of range");
        }
        Word { alphabet: self.clone(), letters }
    }
}

/// A raw word: any letter sequence, cancellations allowed.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Word {
    alphabet: Alphabet,
    letters: Vec<Letter>,
}

fn push_reduced(out: &mut Vec<Letter>, l: Letter) {
    match out.last() {
        Some(&last) if last.cancels(l) => {
            out.pop();
        }
        _ => out.push(l),
    }
}

/// One factor of a product to be reduced in a single pass.
pub(crate) enum Part<'a> {
    /// The letters as given.
    Fwd(&'a [Letter]),
    /// The inverse of the letters (reversed, signs flipped).
    Inv(&'a [Letter]),
    /// A single letter.
    One(Letter),
}

/// Reduces the concatenation of `parts` in one pass, without building the
/// unreduced product.
pub(crate) fn reduce_parts(alphabet: &Alphabet, parts: &[Part<'_>], capacity: usize) -> ReducedWord {
    let mut out = Vec::with_capacity(capacity);
    for part in parts {
        match part {
            Part::Fwd(letters) => {
                for &l in *letters {
                    push_reduced(&mut out, l);
                }
            }
            Part::Inv(letters) => {
                for l in letters.iter().rev() {
                    push_reduced(&mut out, l.inverse());
                }
            }
            Part::One(l) => push_reduced(&mut out, *l),
        }
    }
    ReducedWord(Word { alphabet: alphabet.clone(), letters: out })
}

impl Word {
    /// Parses a word expression, inferring the alphabet from the generator
    /// names in order of first appearance.
    pub fn parse(text: &str) -> Result<Word, ParseError> {
        parse::parse(text, None)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Free reduction: repeatedly deletes adjacent `g g^-1` pairs.
    pub fn reduced(&self) -> ReducedWord {
        let mut out = Vec::with_capacity(self.letters.len());
        for &l in &self.letters {
            push_reduced(&mut out, l);
        }
        ReducedWord(Word { alphabet: self.alphabet.clone(), letters: out })
    }

    /// Plain concatenation, no reduction.
    pub fn concat(&self, other: &Word) -> Word {
        assert_eq!(self.alphabet, other.alphabet, "alphabet mismatch");
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word { alphabet: self.alphabet.clone(), letters }
    }

    /// The letterwise inverse (reversed, signs flipped); no reduction.
    pub fn inverse(&self) -> Word {
        let letters = self.letters.iter().rev().map(|l| l.inverse()).collect();
        Word { alphabet: self.alphabet.clone(), letters }
    }

    /// Exponent sum of each generator, indexed by generator.
    pub fn exponent_sums(&self) -> Vec<i64> {
        let mut sums = vec![0i64; self.alphabet.rank()];
        for l in &self.letters {
            match l.sign() {
                Sign::Plus => sums[l.gen()] += 1,
                Sign::Minus => sums[l.gen()] -= 1,
            }
        }
        sums
    }

    /// True when every exponent sum vanishes, i.e. the word lies in the
    /// commutator subgroup.
    pub fn in_commutator_subgroup(&self) -> bool {
        self.exponent_sums().iter().all(|&s| s == 0)
    }
}

/// Error for operations that require a word of the commutator subgroup.
#[derive(Debug, Error, PartialEq, Eq)]
#[error("word is not in the commutator subgroup (exponent sums {sums:?})")]
pub struct NotInCommutatorSubgroup {
    pub sums: Vec<i64>,
}

pub(crate) fn require_commutator_subgroup(w: &Word) -> Result<(), NotInCommutatorSubgroup> {
    let sums = w.exponent_sums();
    if sums.iter().all(|&s| s == 0) {
        Ok(())
    } else {
        Err(NotInCommutatorSubgroup { sums })
    }
}

/// A freely reduced word.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ReducedWord(Word);

impl ReducedWord {
    pub fn empty(alphabet: &Alphabet) -> ReducedWord {
        ReducedWord(alphabet.empty_word())
    }

    /// Wraps letters that are already reduced; debug-checked.
    pub(crate) fn from_reduced_letters(alphabet: Alphabet, letters: Vec<Letter>) -> ReducedWord {
        debug_assert!(letters.windows(2).all(|w| !w[0].cancels(w[1])), "letters are not reduced");
        ReducedWord(Word { alphabet, letters })
    }

    pub fn as_word(&self) -> &Word {
        &self.0
    }

    pub fn into_word(self) -> Word {
        self.0
    }

    pub fn alphabet(&self) -> &Alphabet {
        self.0.alphabet()
    }

    pub fn letters(&self) -> &[Letter] {
        self.0.letters()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponent_sums(&self) -> Vec<i64> {
        self.0.exponent_sums()
    }

    pub fn in_commutator_subgroup(&self) -> bool {
        self.0.in_commutator_subgroup()
    }

    /// Reduced product `self * other`.
    pub fn multiply(&self, other: &ReducedWord) -> ReducedWord {
        assert_eq!(self.alphabet(), other.alphabet(), "alphabet mismatch");
        let mut out = self.letters().to_vec();
        for &l in other.letters() {
            push_reduced(&mut out, l);
        }
        ReducedWord(Word { alphabet: self.0.alphabet.clone(), letters: out })
    }

    pub fn inverse(&self) -> ReducedWord {
        ReducedWord(self.0.inverse())
    }

    /// `self * h * self^-1`, reduced.
    pub fn conjugate(&self, h: &ReducedWord) -> ReducedWord {
        self.multiply(h).multiply(&self.inverse())
    }

    /// `[u, v] = u^-1 v^-1 u v`, reduced.
    pub fn commutator(u: &ReducedWord, v: &ReducedWord) -> ReducedWord {
        u.inverse().multiply(&v.inverse()).multiply(u).multiply(v)
    }

    /// Splits off the conjugating prefix: returns `(c, k)` with
    /// `self = c k c^-1` letter for letter (no cancellation) and `k`
    /// cyclically reduced.
    pub fn cyclic_reduce(&self) -> (ReducedWord, CyclicWord) {
        let letters = self.letters();
        let mut lo = 0;
        let mut hi = letters.len();
        while lo < hi && letters[lo].cancels(letters[hi - 1]) {
            lo += 1;
            hi -= 1;
        }
        let prefix = ReducedWord::from_reduced_letters(self.0.alphabet.clone(), letters[..lo].to_vec());
        let core = ReducedWord::from_reduced_letters(self.0.alphabet.clone(), letters[lo..hi].to_vec());
        (prefix, CyclicWord::from_cyclically_reduced(core))
    }
}

impl std::ops::Mul for &ReducedWord {
    type Output = ReducedWord;
    fn mul(self, rhs: &ReducedWord) -> ReducedWord {
        self.multiply(rhs)
    }
}

/// Start index of the lexicographically least rotation (Booth's algorithm).
pub fn least_rotation_start<T: Ord>(s: &[T]) -> usize {
    let n = s.len();
    if n < 2 {
        return 0;
    }
    let at = |i: usize| &s[i % n];
    // failure function over the doubled string
    let mut f = vec![usize::MAX; 2 * n];
    let mut k = 0usize;
    for j in 1..2 * n {
        let sj = at(j);
        let mut i = f[j - k - 1];
        while i != usize::MAX && sj != at(k + i + 1) {
            if sj < at(k + i + 1) {
                k = j - i - 1;
            }
            i = f[i];
        }
        if i == usize::MAX && sj != at(k) {
            if sj < at(k) {
                k = j;
            }
            f[j - k] = usize::MAX;
        } else {
            f[j - k] = i.wrapping_add(1);
        }
    }
    k
}

/// A cyclically reduced word up to rotation.
///
/// The stored letter sequence keeps the rotation it was built with;
/// `canonical_start` marks the least rotation. Equality, ordering and
/// hashing all act on the canonical rotation, so two `CyclicWord`s are
/// equal exactly when one is a rotation of the other.
#[derive(Clone, Debug)]
pub struct CyclicWord {
    word: ReducedWord,
    canonical_start: usize,
}

impl CyclicWord {
    pub(crate) fn from_cyclically_reduced(word: ReducedWord) -> CyclicWord {
        let letters = word.letters();
        debug_assert!(
            letters.len() < 2 || !letters[0].cancels(letters[letters.len() - 1]),
            "word is not cyclically reduced"
        );
        let canonical_start = least_rotation_start(letters);
        CyclicWord { word, canonical_start }
    }

    pub fn alphabet(&self) -> &Alphabet {
        self.word.alphabet()
    }

    /// The stored rotation, as produced by cyclic reduction.
    pub fn letters(&self) -> &[Letter] {
        self.word.letters()
    }

    /// The stored rotation as a reduced word.
    pub fn as_reduced(&self) -> &ReducedWord {
        &self.word
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn canonical_start(&self) -> usize {
        self.canonical_start
    }

    pub fn canonical_letters(&self) -> impl Iterator<Item = Letter> + '_ {
        let letters = self.letters();
        let n = letters.len();
        (0..n).map(move |i| letters[(self.canonical_start + i) % n])
    }

    /// The canonical rotation as its own value (stored rotation = canonical).
    pub fn canonical(&self) -> CyclicWord {
        let letters: Vec<Letter> = self.canonical_letters().collect();
        let word = ReducedWord::from_reduced_letters(self.word.alphabet().clone(), letters);
        CyclicWord { word, canonical_start: 0 }
    }
}

impl PartialEq for CyclicWord {
    fn eq(&self, other: &Self) -> bool {
        self.len() == other.len()
            && self.alphabet() == other.alphabet()
            && self.canonical_letters().eq(other.canonical_letters())
    }
}

impl Eq for CyclicWord {}

impl Hash for CyclicWord {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_usize(self.len());
        for l in self.canonical_letters() {
            l.hash(state);
        }
    }
}

impl PartialOrd for CyclicWord {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CyclicWord {
    /// Lexicographic on the canonical rotation; assumes a shared alphabet.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.canonical_letters().cmp(other.canonical_letters())
    }
}

fn fmt_letters(f: &mut fmt::Formatter<'_>, alphabet: &Alphabet, letters: &[Letter]) -> fmt::Result {
    if letters.is_empty() {
        return write!(f, "1");
    }
    let mut first = true;
    let mut i = 0;
    while i < letters.len() {
        let l = letters[i];
        let mut run = 1;
        while i + run < letters.len() && letters[i + run] == l {
            run += 1;
        }
        if !first {
            write!(f, " ")?;
        }
        first = false;
        let exp = match l.sign() {
            Sign::Plus => run as i64,
            Sign::Minus => -(run as i64),
        };
        if exp == 1 {
            write!(f, "{}", alphabet.name(l.gen()))?;
        } else {
            write!(f, "{}^{}", alphabet.name(l.gen()), exp)?;
        }
        i += run;
    }
    Ok(())
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_letters(f, &self.alphabet, &self.letters)
    }
}

impl fmt::Display for ReducedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl fmt::Display for CyclicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.word.fmt(f)
    }
}

/// Word expression parse error, with the byte offset of the problem.
#[derive(Debug, Error, PartialEq, Eq)]
#[error("parse error at byte {position}: {kind}")]
pub struct ParseError {
    pub position: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseErrorKind {
    #[error("unexpected character {0:?}")]
    UnexpectedChar(char),
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("unknown generator {0:?}")]
    UnknownGenerator(String),
    #[error("expected {0}")]
    Expected(&'static str),
    #[error("exponent overflows")]
    ExponentOverflow,
    #[error("empty word expression")]
    EmptyExpression,
}

mod parse {
    //! Recursive descent for the word grammar:
    //!
    //! ```text
    //! expr      := factor { [ '*' ] factor }
    //! factor    := atom [ '^' integer ]
    //! atom      := generator | '1' | '[' expr ',' expr ']' | '(' expr ')'
    //! generator := lowercase-letter digits*
    //! integer   := [ '-' ] digits
    //! ```
    use super::*;

    struct Parser<'a> {
        bytes: &'a [u8],
        pos: usize,
        names: Vec<String>,
        fixed: Option<Alphabet>,
    }

    impl<'a> Parser<'a> {
        fn err(&self, kind: ParseErrorKind) -> ParseError {
            ParseError { position: self.pos, kind }
        }

        fn peek(&self) -> Option<u8> {
            self.bytes.get(self.pos).copied()
        }

        fn skip_ws(&mut self) {
            while matches!(self.peek(), Some(b) if b.is_ascii_whitespace()) {
                self.pos += 1;
            }
        }

        fn gen_index(&mut self, name: String) -> Result<usize, ParseError> {
            if let Some(alph) = &self.fixed {
                alph.index(&name)
                    .ok_or_else(|| ParseError {
                        position: self.pos - name.len(),
                        kind: ParseErrorKind::UnknownGenerator(name),
                    })
            } else if let Some(i) = self.names.iter().position(|n| *n == name) {
                Ok(i)
            } else {
                self.names.push(name);
                Ok(self.names.len() - 1)
            }
        }

        fn integer(&mut self) -> Result<i64, ParseError> {
            let start = self.pos;
            if self.peek() == Some(b'-') {
                self.pos += 1;
            }
            let digits_start = self.pos;
            while matches!(self.peek(), Some(b) if b.is_ascii_digit()) {
                self.pos += 1;
            }
            if self.pos == digits_start {
                return Err(self.err(ParseErrorKind::Expected("digits after '^'")));
            }
            let text = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
            text.parse::<i64>().map_err(|_| self.err(ParseErrorKind::ExponentOverflow))
        }

        /// Letters of one atom, or None when the next token ends the
        /// enclosing expression.
        fn atom(&mut self) -> Result<Option<Vec<TempLetter>>, ParseError> {
            self.skip_ws();
            match self.peek() {
                None | Some(b']') | Some(b')') | Some(b',') => Ok(None),
                Some(b'1') => {
                    self.pos += 1;
                    Ok(Some(Vec::new()))
                }
                Some(b'(') => {
                    self.pos += 1;
                    let inner = self.expr()?;
                    self.skip_ws();
                    if self.peek() != Some(b')') {
                        return Err(self.err(ParseErrorKind::Expected("')'")));
                    }
                    self.pos += 1;
                    Ok(Some(inner))
                }
                Some(b'[') => {
                    self.pos += 1;
                    let u = self.expr()?;
                    self.skip_ws();
                    if self.peek() != Some(b',') {
                        return Err(self.err(ParseErrorKind::Expected("','")));
                    }
                    self.pos += 1;
                    let v = self.expr()?;
                    self.skip_ws();
                    if self.peek() != Some(b']') {
                        return Err(self.err(ParseErrorKind::Expected("']'")));
                    }
                    self.pos += 1;
                    // [u, v] = u^-1 v^-1 u v, as a letter sequence
                    let mut out = invert(&u);
                    out.extend(invert(&v));
                    out.extend(u);
                    out.extend(v);
                    Ok(Some(out))
                }
                Some(b) if b.is_ascii_lowercase() => {
                    let start = self.pos;
                    self.pos += 1;
                    while matches!(self.peek(), Some(d) if d.is_ascii_digit()) {
                        self.pos += 1;
                    }
                    let name = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap().to_string();
                    let gen = self.gen_index(name)?;
                    Ok(Some(vec![TempLetter { gen, sign: Sign::Plus }]))
                }
                Some(b) => Err(self.err(ParseErrorKind::UnexpectedChar(b as char))),
            }
        }

        fn factor(&mut self) -> Result<Option<Vec<TempLetter>>, ParseError> {
            let Some(atom) = self.atom()? else { return Ok(None) };
            self.skip_ws();
            if self.peek() == Some(b'^') {
                self.pos += 1;
                self.skip_ws();
                let exp = self.integer()?;
                let base = if exp < 0 { invert(&atom) } else { atom };
                let reps = exp.unsigned_abs();
                if reps.saturating_mul(base.len() as u64) > 1_000_000 {
                    return Err(self.err(ParseErrorKind::ExponentOverflow));
                }
                let mut out = Vec::with_capacity(base.len() * reps as usize);
                for _ in 0..reps {
                    out.extend_from_slice(&base);
                }
                Ok(Some(out))
            } else {
                Ok(Some(atom))
            }
        }

        fn expr(&mut self) -> Result<Vec<TempLetter>, ParseError> {
            let mut out = Vec::new();
            let mut any = false;
            loop {
                self.skip_ws();
                if self.peek() == Some(b'*') {
                    if !any {
                        return Err(self.err(ParseErrorKind::UnexpectedChar('*')));
                    }
                    self.pos += 1;
                }
                match self.factor()? {
                    Some(letters) => {
                        any = true;
                        out.extend(letters);
                    }
                    None => break,
                }
            }
            if !any {
                return Err(self.err(ParseErrorKind::EmptyExpression));
            }
            Ok(out)
        }
    }

    #[derive(Clone, Copy)]
    struct TempLetter {
        gen: usize,
        sign: Sign,
    }

    fn invert(letters: &[TempLetter]) -> Vec<TempLetter> {
        letters
            .iter()
            .rev()
            .map(|l| TempLetter { gen: l.gen, sign: l.sign.flip() })
            .collect()
    }

    pub(super) fn parse(text: &str, alphabet: Option<&Alphabet>) -> Result<Word, ParseError> {
        let mut parser = Parser {
            bytes: text.as_bytes(),
            pos: 0,
            names: Vec::new(),
            fixed: alphabet.cloned(),
        };
        let letters = parser.expr()?;
        parser.skip_ws();
        if let Some(b) = parser.peek() {
            return Err(parser.err(ParseErrorKind::UnexpectedChar(b as char)));
        }
        let alphabet = match parser.fixed {
            Some(a) => a,
            None => {
                if parser.names.is_empty() {
                    // a bare "1": give it a minimal alphabet
                    Alphabet::with_rank(1)
                } else {
                    Alphabet::new(parser.names).map_err(|_| ParseError {
                        position: 0,
                        kind: ParseErrorKind::Expected("valid generator names"),
                    })?
                }
            }
        };
        let letters = letters
            .into_iter()
            .map(|l| Letter::new(l.gen, l.sign))
            .collect();
        Ok(Word { alphabet: alphabet.clone(), letters })
    }
}
