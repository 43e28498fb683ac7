//! Independent normal-form oracle.
//!
//! Works on whole syllable lists instead of folding products: the word is
//! cut into blocks (top-level syllables vs. runs of lower-level syllables)
//! and rewritten to a fixpoint with four rules:
//!
//! 1. a top-level block lying in `B_{n-1}` is re-tagged to level `n-1`;
//! 2. a lower block whose (recursively computed) value lies in `B_{n-1}`
//!    is absorbed into a central accumulator on the right;
//! 3. adjacent lower blocks are concatenated;
//! 4. adjacent top-level blocks are multiplied in `H_n`.
//!
//! Only when no rule fires are coset representatives chosen. Nothing here
//! calls into [`crate::amalgam::Amalgam`]'s reduction.

use crate::amalgam::{AltForm, CanonicalForm, GroupElement, Letter, Syllable, Word};
use crate::error::{Error, Result};
use crate::system::FactorSystem;

enum Block<E> {
    Low(Vec<Syllable<E>>),
    Top(E),
}

pub fn naive_reduce<S: FactorSystem>(
    sys: &S,
    word: &Word<S::Elem>,
) -> Result<GroupElement<S::Elem>> {
    if let Some(cap) = sys.max_level() {
        if let Some(s) = word.syllables.iter().find(|s| s.level > cap) {
            return Err(Error::UnsupportedLevel {
                level: s.level,
                cap,
            });
        }
    }
    Ok(GroupElement::from_cf(normalize(
        sys,
        word.syllables.clone(),
    )))
}

fn normalize<S: FactorSystem>(
    sys: &S,
    syllables: Vec<Syllable<S::Elem>>,
) -> CanonicalForm<S::Elem> {
    let id = sys.factor_id(0);
    let mut syl: Vec<Syllable<S::Elem>> = syllables
        .into_iter()
        .filter(|s| !sys.factor_eq(s.level, &s.elem, &id))
        .collect();
    // Re-tag base members downwards one level at a time.
    loop {
        let mut changed = false;
        for s in syl.iter_mut() {
            if s.level >= 1 && sys.in_base(s.level - 1, &s.elem) {
                s.level -= 1;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let Some(n) = syl.iter().map(|s| s.level).max() else {
        return CanonicalForm::Base(id);
    };
    if n == 0 {
        let v = syl
            .iter()
            .fold(id, |acc, s| sys.factor_mul(0, &acc, &s.elem));
        return CanonicalForm::Base(v);
    }

    let mut blocks: Vec<Block<S::Elem>> = Vec::new();
    for s in syl {
        if s.level == n {
            blocks.push(Block::Top(s.elem));
        } else if let Some(Block::Low(run)) = blocks.last_mut() {
            run.push(s);
        } else {
            blocks.push(Block::Low(vec![s]));
        }
    }

    let mut central = sys.factor_id(0);
    loop {
        if let Some(i) = blocks
            .iter()
            .position(|b| matches!(b, Block::Top(x) if sys.in_base(n - 1, x)))
        {
            let Block::Top(x) = blocks.remove(i) else {
                unreachable!()
            };
            blocks.insert(i, Block::Low(vec![Syllable::new(n - 1, x)]));
            continue;
        }
        let absorbed = blocks.iter().position(|b| match b {
            Block::Low(run) => matches!(
                normalize(sys, run.clone()),
                CanonicalForm::Base(h) if sys.in_base(n - 1, &h)
            ),
            Block::Top(_) => false,
        });
        if let Some(i) = absorbed {
            let Block::Low(run) = blocks.remove(i) else {
                unreachable!()
            };
            let CanonicalForm::Base(h) = normalize(sys, run) else {
                unreachable!()
            };
            central = sys.factor_mul(0, &central, &h);
            continue;
        }
        let adjacent = blocks.windows(2).position(|w| {
            matches!(
                (&w[0], &w[1]),
                (Block::Low(_), Block::Low(_)) | (Block::Top(_), Block::Top(_))
            )
        });
        if let Some(i) = adjacent {
            let second = blocks.remove(i + 1);
            match (&mut blocks[i], second) {
                (Block::Low(a), Block::Low(b)) => a.extend(b),
                (Block::Top(a), Block::Top(b)) => *a = sys.factor_mul(n, a, &b),
                _ => unreachable!(),
            }
            continue;
        }
        break;
    }

    if !blocks.iter().any(|b| matches!(b, Block::Top(_))) {
        let mut rest: Vec<Syllable<S::Elem>> = Vec::new();
        for b in blocks {
            if let Block::Low(run) = b {
                rest.extend(run);
            }
        }
        rest.push(Syllable::new(0, central));
        return normalize(sys, rest);
    }

    let mut tail = central;
    let mut letters = Vec::with_capacity(blocks.len());
    for b in blocks {
        match b {
            Block::Top(x) => {
                let (rep, res) = sys.split(n, &x);
                tail = sys.factor_mul(0, &tail, &res);
                letters.push(Letter::Right(rep));
            }
            Block::Low(run) => {
                let (rep, res) = representative(sys, normalize(sys, run), n - 1);
                tail = sys.factor_mul(0, &tail, &res);
                letters.push(Letter::Left(rep));
            }
        }
    }
    CanonicalForm::Alt(AltForm {
        level: n,
        letters,
        tail,
    })
}

/// Representative of `x B_k` for `x ∈ G_k`, plus the residue in `B_k`.
fn representative<S: FactorSystem>(
    sys: &S,
    x: CanonicalForm<S::Elem>,
    k: usize,
) -> (CanonicalForm<S::Elem>, S::Elem) {
    match x {
        CanonicalForm::Base(h) => {
            let (frac, whole) = sys.split_top(0, &h);
            if k == 0 {
                (CanonicalForm::Base(frac), whole)
            } else {
                let (mid, res) = sys.split_chain(0, k, &whole);
                (CanonicalForm::Base(sys.factor_mul(0, &frac, &mid)), res)
            }
        }
        CanonicalForm::Alt(mut a) => {
            let (r, res) = sys.split_chain(a.level - 1, k, &a.tail);
            a.tail = r;
            (CanonicalForm::Alt(a), res)
        }
    }
}
