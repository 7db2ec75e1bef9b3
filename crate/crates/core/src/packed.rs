//! Fast path for shuffle and half shuffle on machine integers.
//!
//! Applies when every letter is at most 15: a word is packed four bits per
//! letter into an integer key, first letter in the top nibble, so that keys
//! of equal length compare like the words. Coefficients are brought to a
//! common denominator and kept as checked machine integers; overflow makes
//! the caller fall back to exact rationals.
//!
//! Products are computed by walking the output words in prefix order. For
//! each prefix the walk keeps the pairs of positions in the prefix trees of
//! the two factors that can spell it, with multiplicities, so each output
//! word is produced once and no hashing is needed.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, One, ToPrimitive, Zero};

use crate::words::{FreeElement, Letter, Rational, Word};

const BITS: u32 = 4;
const MAX_LETTER: usize = 15;

pub(crate) trait Key: Copy + Ord + Eq {
    const LETTERS: u32;
    const ZERO: Self;
    fn len(self) -> u32;
    fn letter(self, i: u32) -> u8;
    fn with(self, i: u32, a: u8) -> Self;
}

macro_rules! key_impl {
    ($t:ty) => {
        impl Key for $t {
            const LETTERS: u32 = <$t>::BITS / BITS;
            const ZERO: Self = 0;
            #[inline]
            fn len(self) -> u32 {
                Self::LETTERS - self.trailing_zeros() / BITS
            }
            #[inline]
            fn letter(self, i: u32) -> u8 {
                ((self >> (<$t>::BITS - BITS * (i + 1))) & 0xF) as u8
            }
            #[inline]
            fn with(self, i: u32, a: u8) -> Self {
                self | (a as $t) << (<$t>::BITS - BITS * (i + 1))
            }
        }
    };
}

key_impl!(u64);
key_impl!(u128);

pub(crate) trait Coeff:
    Copy + Eq + Zero + One + CheckedAdd + CheckedSub + CheckedMul + Integer + Into<BigInt>
{
    fn from_big(x: &BigInt) -> Option<Self>;
}

impl Coeff for i64 {
    fn from_big(x: &BigInt) -> Option<Self> {
        x.to_i64()
    }
}

impl Coeff for i128 {
    fn from_big(x: &BigInt) -> Option<Self> {
        x.to_i128()
    }
}

/// Key of a word, `None` if a letter or the length does not fit.
fn key_of<K: Key>(w: &Word) -> Option<K> {
    if w.len() > K::LETTERS as usize {
        return None;
    }
    let mut key = K::ZERO;
    for (i, a) in w.letters().iter().enumerate() {
        if a.index() > MAX_LETTER {
            return None;
        }
        key = key.with(i as u32, a.index() as u8);
    }
    Some(key)
}

fn word_of<K: Key>(key: K) -> Word {
    Word::from_letters((0..key.len()).map(|i| Letter::of(key.letter(i) as usize)))
}

/// Terms in the canonical word order (length, then lexicographic) with
/// nonzero coefficients.
type Terms<K, C> = Vec<(K, C)>;

fn max_len<K: Key, C>(terms: &Terms<K, C>) -> u32 {
    terms.last().map_or(0, |(k, _)| k.len())
}

/// Prefix tree of an element, numbered breadth first so that following a
/// fixed letter is increasing on the nodes that have that child. Node `n`
/// is the record `nodes[n·(stride+1)..]`: the child by letter `a` at offset
/// `a − 1`, then a word holding [`LEAF`] for childless nodes and, for the
/// end of a term, one plus the index of its coefficient in `values`.
struct Trie<C> {
    stride: usize,
    nodes: Vec<u32>,
    values: Vec<C>,
}

const NONE: u32 = u32::MAX;
const LEAF: u32 = 1 << 31;

impl<C: Coeff> Trie<C> {
    fn new<K: Key>(terms: &Terms<K, C>, stride: usize) -> Self {
        let mut children = vec![NONE; stride];
        let mut value = vec![C::zero()];
        for &(key, c) in terms {
            let mut node = 0usize;
            for i in 0..key.len() {
                let slot = node * stride + key.letter(i) as usize - 1;
                node = match children[slot] {
                    NONE => {
                        children[slot] = value.len() as u32;
                        children.extend(std::iter::repeat_n(NONE, stride));
                        value.push(C::zero());
                        value.len() - 1
                    }
                    child => child as usize,
                };
            }
            value[node] = c;
        }
        let mut order = vec![0u32];
        let mut rank = vec![NONE; value.len()];
        rank[0] = 0;
        let mut head = 0;
        while head < order.len() {
            let node = order[head] as usize;
            head += 1;
            for &child in children[node * stride..(node + 1) * stride]
                .iter()
                .filter(|&&c| c != NONE)
            {
                rank[child as usize] = order.len() as u32;
                order.push(child);
            }
        }
        let mut nodes = Vec::with_capacity(order.len() * (stride + 1));
        let mut values = Vec::new();
        for &n in &order {
            let row = &children[n as usize * stride..(n as usize + 1) * stride];
            nodes.extend(row.iter().map(|&c| if c == NONE { NONE } else { rank[c as usize] }));
            let mut meta = if row.iter().all(|&c| c == NONE) { LEAF } else { 0 };
            if !value[n as usize].is_zero() {
                values.push(value[n as usize]);
                meta |= values.len() as u32;
            }
            nodes.push(meta);
        }
        Trie { stride, nodes, values }
    }

    #[inline]
    fn child(&self, node: usize, l: usize) -> u32 {
        self.nodes[node * (self.stride + 1) + l]
    }

    #[inline]
    fn row(&self, node: usize) -> &[u32] {
        &self.nodes[node * (self.stride + 1)..node * (self.stride + 1) + self.stride]
    }

    #[inline]
    fn meta(&self, node: usize) -> u32 {
        self.nodes[node * (self.stride + 1) + self.stride]
    }

    #[inline]
    fn value(&self, meta: u32) -> Option<C> {
        match meta & !LEAF {
            0 => None,
            i => Some(self.values[i as usize - 1]),
        }
    }
}

/// State of the walk: a pair of trie positions (packed as `x << 32 | y`)
/// that can spell the current prefix, with its multiplicity. The states of
/// every open prefix live on one stack, each prefix's sorted by pair.
struct Walk<'a, K, C> {
    f: &'a Trie<C>,
    g: &'a Trie<C>,
    stack: Vec<(u64, C)>,
    buffers: Vec<Vec<Vec<(u64, C)>>>,
    by_len: Vec<Terms<K, C>>,
    overflow: bool,
}

impl<K: Key, C: Coeff> Walk<'_, K, C> {
    /// Records the coefficient of the word `key` spelled by the states
    /// `stack[from..]` and reports whether any of them can be extended.
    fn emit(&mut self, from: usize, key: K, len: usize) -> bool {
        let mut total = C::zero();
        let mut alive = false;
        for &(pair, c) in &self.stack[from..] {
            let (x, y) = ((pair >> 32) as usize, pair as u32 as usize);
            let (mx, my) = (self.f.meta(x), self.g.meta(y));
            alive |= mx & my & LEAF == 0;
            let (Some(vx), Some(vy)) = (self.f.value(mx), self.g.value(my)) else {
                continue;
            };
            match c
                .checked_mul(&vx)
                .and_then(|t| t.checked_mul(&vy))
                .and_then(|t| total.checked_add(&t))
            {
                Some(t) => total = t,
                None => self.overflow = true,
            }
        }
        if !total.is_zero() {
            self.by_len[len].push((key, total));
        }
        alive
    }

    /// Extends the word `key` of length `depth`, whose states are
    /// `stack[from..to]`, by every letter. `S` is the alphabet size when
    /// known at compile time and 0 otherwise.
    fn descend<const S: usize>(&mut self, from: usize, to: usize, depth: usize, key: K) {
        let stride = if S == 0 { self.f.stride } else { S };
        if self.buffers.len() <= depth {
            self.buffers.resize_with(depth + 1, || vec![Vec::new(); 2 * stride]);
        }
        // Successors through f and through g, by letter; each is sorted.
        let buffers = &mut self.buffers[depth];
        buffers.iter_mut().for_each(Vec::clear);
        for &(pair, c) in &self.stack[from..to] {
            let (x, y) = ((pair >> 32) as usize, pair as u32 as usize);
            let (fx, gy) = (self.f.row(x), self.g.row(y));
            for l in 0..stride {
                if fx[l] != NONE {
                    buffers[l].push(((fx[l] as u64) << 32 | y as u64, c));
                }
                if gy[l] != NONE {
                    buffers[stride + l].push(((x as u64) << 32 | gy[l] as u64, c));
                }
            }
        }
        for l in 0..stride {
            let start = self.stack.len();
            let (xs, ys) = (&self.buffers[depth][l], &self.buffers[depth][stride + l]);
            if xs.is_empty() && ys.is_empty() {
                continue;
            }
            merge(xs, ys, &mut self.stack, &mut self.overflow);
            if self.stack.len() > start {
                let key = key.with(depth as u32, l as u8 + 1);
                if self.emit(start, key, depth + 1) {
                    self.descend::<S>(start, self.stack.len(), depth + 1, key);
                }
                self.stack.truncate(start);
            }
        }
    }
}

/// Appends the sorted union of two sorted state lists to `out`, adding
/// multiplicities and dropping pairs that cancel.
fn merge<C: Coeff>(xs: &[(u64, C)], ys: &[(u64, C)], out: &mut Vec<(u64, C)>, overflow: &mut bool) {
    let (mut i, mut j) = (0, 0);
    while i < xs.len() && j < ys.len() {
        let (p, q) = (xs[i], ys[j]);
        if p.0 < q.0 {
            out.push(p);
            i += 1;
        } else if q.0 < p.0 {
            out.push(q);
            j += 1;
        } else {
            match p.1.checked_add(&q.1) {
                Some(c) if c.is_zero() => {}
                Some(c) => out.push((p.0, c)),
                None => *overflow = true,
            }
            i += 1;
            j += 1;
        }
    }
    out.extend_from_slice(&xs[i..]);
    out.extend_from_slice(&ys[j..]);
}

/// Walks from the states `start` spelling `key` of length `len`.
fn walk_from<K: Key, C: Coeff>(walk: &mut Walk<'_, K, C>, start: &[(u64, C)], key: K, len: usize) {
    let from = walk.stack.len();
    walk.stack.extend_from_slice(start);
    if walk.emit(from, key, len) {
        let to = walk.stack.len();
        match walk.f.stride {
            1 => walk.descend::<1>(from, to, len, key),
            2 => walk.descend::<2>(from, to, len, key),
            3 => walk.descend::<3>(from, to, len, key),
            4 => walk.descend::<4>(from, to, len, key),
            _ => walk.descend::<0>(from, to, len, key),
        }
    }
    walk.stack.truncate(from);
}

#[derive(Clone, Copy, PartialEq, Eq)]
pub(crate) enum Mode {
    Shuffle,
    Half,
    /// `f ≺ g − g ≺ f` in one walk, so that cancelling pairs are merged
    /// before they are extended.
    Area,
}

/// The product selected by `mode`; `None` on overflow or if the output
/// words do not fit the key.
fn product_terms<K: Key, C: Coeff>(f: &Terms<K, C>, g: &Terms<K, C>, mode: Mode) -> Option<Terms<K, C>> {
    let out_len = max_len(f) + max_len(g);
    if out_len > K::LETTERS {
        return None;
    }
    let letters = f
        .iter()
        .chain(g)
        .flat_map(|&(k, _)| (0..k.len()).map(move |i| k.letter(i)))
        .max()
        .unwrap_or(0);
    let stride = letters.max(1) as usize;
    let (tf, tg) = (Trie::new(f, stride), Trie::new(g, stride));
    let mut walk = Walk {
        f: &tf,
        g: &tg,
        stack: Vec::new(),
        buffers: Vec::new(),
        by_len: vec![Vec::new(); out_len as usize + 1],
        overflow: false,
    };
    if mode == Mode::Shuffle {
        walk_from(&mut walk, &[(0, C::one())], K::ZERO, 0);
    } else {
        for a in 1..=letters {
            let mut start = Vec::new();
            let y = tg.child(0, a as usize - 1);
            if mode == Mode::Area && y != NONE {
                start.push((y as u64, C::zero() - C::one()));
            }
            let x = tf.child(0, a as usize - 1);
            if x != NONE {
                start.push(((x as u64) << 32, C::one()));
            }
            if !start.is_empty() {
                let key = K::ZERO.with(0, a);
                walk_from(&mut walk, &start, key, 1);
            }
        }
    }
    if walk.overflow {
        return None;
    }
    Some(walk.by_len.concat())
}

/// Sorted sum `f + sign·g` of term lists.
fn combine<K: Key, C: Coeff>(f: &Terms<K, C>, g: &Terms<K, C>, negate: bool) -> Option<Terms<K, C>> {
    let order = |k: K| (k.len(), k);
    let mut out = Vec::with_capacity(f.len() + g.len());
    let (mut i, mut j) = (0, 0);
    let signed = |c: C| if negate { C::zero().checked_sub(&c) } else { Some(c) };
    while i < f.len() || j < g.len() {
        let take_f = j == g.len() || (i < f.len() && order(f[i].0) < order(g[j].0));
        let take_g = i == f.len() || (j < g.len() && order(g[j].0) < order(f[i].0));
        if take_f {
            out.push(f[i]);
            i += 1;
        } else if take_g {
            out.push((g[j].0, signed(g[j].1)?));
            j += 1;
        } else {
            let c = f[i].1.checked_add(&signed(g[j].1)?)?;
            if !c.is_zero() {
                out.push((f[i].0, c));
            }
            i += 1;
            j += 1;
        }
    }
    Some(out)
}

/// Terms scaled to a common denominator.
fn pack<K: Key, C: Coeff>(f: &FreeElement) -> Option<(Terms<K, C>, BigInt)> {
    let denom = f.terms().fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
    let terms = f
        .terms()
        .map(|(w, c)| Some((key_of(w)?, C::from_big(&(c.numer() * (&denom / c.denom())))?)))
        .collect::<Option<Vec<_>>>()?;
    Some((terms, denom))
}

fn unpack<K: Key, C: Coeff>(terms: Terms<K, C>, denom: &BigInt) -> FreeElement {
    let small = C::from_big(denom);
    FreeElement::from_sorted(terms.into_iter().map(|(k, c)| {
        let coeff = match small {
            Some(d) => {
                let g = c.gcd(&d);
                let (n, d) = (c / g, d / g);
                let (n, d) = if d < C::zero() {
                    (C::zero() - n, C::zero() - d)
                } else {
                    (n, d)
                };
                Rational::new_raw(n.into(), d.into())
            }
            None => Rational::new(c.into(), denom.clone()),
        };
        (word_of(k), coeff)
    }))
}

fn run<K: Key, C: Coeff>(f: &FreeElement, g: &FreeElement, mode: Mode) -> Option<FreeElement> {
    let (pf, df) = pack::<K, C>(f)?;
    let (pg, dg) = pack::<K, C>(g)?;
    let out = product_terms(&pf, &pg, mode)?;
    Some(unpack(out, &(df * dg)))
}

/// The product of `f` and `g` selected by `mode`, or `None` if the fast
/// path does not apply.
pub(crate) fn product(f: &FreeElement, g: &FreeElement, mode: Mode) -> Option<FreeElement> {
    run::<u64, i64>(f, g, mode).or_else(|| run::<u128, i128>(f, g, mode))
}

/// Element with integer coefficients and words of at most 16 letters up to
/// 15. Every operation returns `None` once a result leaves that range.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub(crate) struct IntElement {
    terms: Terms<u64, i64>,
}

impl IntElement {
    pub(crate) fn from_free(f: &FreeElement) -> Option<Self> {
        if f.terms().any(|(_, c)| !c.is_integer()) {
            return None;
        }
        let (terms, _) = pack(f)?;
        Some(IntElement { terms })
    }

    pub(crate) fn to_free(&self) -> FreeElement {
        unpack(self.terms.clone(), &BigInt::one())
    }

    pub(crate) fn constant(c: i64) -> Self {
        IntElement {
            terms: if c == 0 { Vec::new() } else { vec![(0, c)] },
        }
    }

    pub(crate) fn empty_coeff(&self) -> i64 {
        match self.terms.first() {
            Some(&(0, c)) => c,
            _ => 0,
        }
    }

    pub(crate) fn shuffle(&self, g: &Self) -> Option<Self> {
        product_terms(&self.terms, &g.terms, Mode::Shuffle).map(|terms| IntElement { terms })
    }

    pub(crate) fn half_shuffle(&self, g: &Self) -> Option<Self> {
        product_terms(&self.terms, &g.terms, Mode::Half).map(|terms| IntElement { terms })
    }

    pub(crate) fn area(&self, g: &Self) -> Option<Self> {
        product_terms(&self.terms, &g.terms, Mode::Area).map(|terms| IntElement { terms })
    }

    pub(crate) fn add(&self, g: &Self) -> Option<Self> {
        combine(&self.terms, &g.terms, false).map(|terms| IntElement { terms })
    }

    pub(crate) fn sub(&self, g: &Self) -> Option<Self> {
        combine(&self.terms, &g.terms, true).map(|terms| IntElement { terms })
    }

    pub(crate) fn scale(&self, c: i64) -> Option<Self> {
        if c == 0 {
            return Some(IntElement::default());
        }
        let terms = self
            .terms
            .iter()
            .map(|&(k, x)| Some((k, x.checked_mul(c)?)))
            .collect::<Option<_>>()?;
        Some(IntElement { terms })
    }
}
