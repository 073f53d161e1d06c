#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""괄호 트리의 자유 Lie 정규형

k >= 3 에서는 싱글톤끼리의 괄호가 0이므로, 중괄호를 포함한 괄호 트리는
"글자" 위의 자유 Lie 원소로 쓸 수 있습니다. 글자는

    [p1,[p2,...[pj, B]...]]     (p1 < p2 < ... < pj 싱글톤, B 중괄호)

이고, 트리는 오른쪽 정규 단어 [w1,[w2,...[wq, t]...]] 입니다. 꼬리 t는
트리의 최소 라벨을 가진 글자이며 나머지 글자의 순서는 자유입니다.
k = 2 에서는 글자가 싱글톤 자체입니다.

Jacobi 직선화는 최소 라벨이 접두부에 있는 글자를 일반화 Jacobi 관계로
풀어, 최소 라벨이 중괄호 안에 있는 글자들의 합으로 바꿉니다.
"""

import logging
import random
from dataclasses import dataclass
from typing import Dict, FrozenSet, Optional, Tuple

from algebra_utils import (
    Atom, Factor, FlatBrace, Node, RawBrace, Singleton,
    factor_degree, koszul_swap_sign, parity_sign, shifted,
)
from error_utils import SignConventionError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Letter:
    prefix: Tuple[int, ...]
    core: Atom

    @property
    def labels(self) -> FrozenSet[int]:
        core = (self.core.label,) if isinstance(self.core, Singleton) else self.core.labels
        return frozenset(self.prefix) | frozenset(core)

    @property
    def min_label(self) -> int:
        return min(self.labels)

    def is_straight(self) -> bool:
        """최소 라벨이 중괄호 안에 있으면 직선화된 글자"""
        if isinstance(self.core, Singleton):
            return True
        return self.min_label in self.core.labels


Word = Tuple[Letter, ...]
LieElement = Dict[Word, int]


def _accumulate(acc: Dict, key, coeff: int) -> None:
    value = acc.get(key, 0) + coeff
    if value:
        acc[key] = value
    else:
        acc.pop(key, None)


def letter_degree(letter: Letter, d: int) -> int:
    return factor_degree(letter.core, d) + len(letter.prefix) * (d - 1)


def word_degree(word: Word, d: int) -> int:
    return sum(letter_degree(l, d) for l in word) + (len(word) - 1) * (d - 1)


def word_min(word: Word) -> int:
    return min(l.min_label for l in word)


def ad_sequence(word: Word, d: int) -> Dict[Word, int]:
    """ad_{[w1,[w2,...]]} 를 ad_{e1}...ad_{er} 합성들의 합으로 전개"""
    if len(word) == 1:
        return {word: 1}
    head, rest = word[0], word[1:]
    sign = koszul_swap_sign(shifted(letter_degree(head, d), d), shifted(word_degree(rest, d), d))
    out: Dict[Word, int] = {}
    for seq, coeff in ad_sequence(rest, d).items():
        _accumulate(out, (head,) + seq, coeff)
        _accumulate(out, seq + (head,), -sign * coeff)
    return out


def bracket_words(u: Word, v: Word, d: int) -> LieElement:
    """정규 단어 u, v 의 괄호. 최소 라벨을 가진 쪽이 꼬리가 됩니다."""
    sign = 1
    if word_min(u) < word_min(v):
        sign = -koszul_swap_sign(shifted(word_degree(u, d), d), shifted(word_degree(v, d), d))
        u, v = v, u
    out: LieElement = {}
    for seq, coeff in ad_sequence(u, d).items():
        _accumulate(out, seq + v, sign * coeff)
    return out


def lie_bracket(x: LieElement, y: LieElement, d: int) -> LieElement:
    out: LieElement = {}
    for u, cu in x.items():
        for v, cv in y.items():
            for w, c in bracket_words(u, v, d).items():
                _accumulate(out, w, cu * cv * c)
    return out


def renormalize(word: Word, d: int) -> LieElement:
    """꼬리 조건이 깨진 단어를 안쪽부터 다시 괄호로 묶어 정규화"""
    acc: LieElement = {(word[-1],): 1}
    for letter in reversed(word[:-1]):
        acc = lie_bracket({(letter,): 1}, acc, d)
    return acc


def prepend(label: int, letter: Letter, d: int) -> Tuple[int, Letter]:
    """[x_label, letter]: 접두부를 오름차순으로 유지하는 부호와 새 글자"""
    passed = sum(1 for p in letter.prefix if p < label)
    prefix = tuple(sorted(letter.prefix + (label,)))
    return parity_sign(passed * (d - 1)), Letter(prefix, letter.core)


def ad_singleton(label: int, x: LieElement, d: int) -> LieElement:
    """[x_label, X] (싱글톤끼리의 괄호는 0)"""
    out: LieElement = {}
    for word, coeff in x.items():
        needs_tail = label < word_min(word)
        sign = 1
        for j, letter in enumerate(word):
            s, new_letter = prepend(label, letter, d)
            new_word = word[:j] + (new_letter,) + word[j + 1:]
            if needs_tail and j < len(word) - 1:
                for w, c in renormalize(new_word, d).items():
                    _accumulate(out, w, coeff * sign * s * c)
            else:
                _accumulate(out, new_word, coeff * sign * s)
            sign *= koszul_swap_sign(d - 1, shifted(letter_degree(letter, d), d))
    return out


_ZERO = ("zero", None)


def _to_lie(factor: Factor, d: int, poisson: bool):
    if isinstance(factor, Singleton):
        if poisson:
            return ("lie", {(Letter((), factor),): 1})
        return ("single", factor.label)
    if isinstance(factor, FlatBrace):
        return ("lie", {(Letter((), factor),): 1})
    if isinstance(factor, RawBrace):
        raise SignConventionError(f"정화되지 않은 중괄호가 괄호 정리 단계에 남아 있습니다")

    left = _to_lie(factor.left, d, poisson)
    right = _to_lie(factor.right, d, poisson)
    if left[0] == "zero" or right[0] == "zero":
        return _ZERO
    if left[0] == "single" and right[0] == "single":
        # 중괄호 없는 괄호
        return _ZERO
    if left[0] == "single":
        return ("lie", ad_singleton(left[1], right[1], d))
    if right[0] == "single":
        flipped = {
            w: -koszul_swap_sign(shifted(word_degree(w, d), d), d - 1) * c
            for w, c in left[1].items()
        }
        return ("lie", ad_singleton(right[1], flipped, d))
    return ("lie", lie_bracket(left[1], right[1], d))


def tree_to_lie(factor: Factor, d: int, poisson: bool) -> LieElement:
    """괄호 트리 인자를 자유 Lie 원소로 변환 (중괄호 없는 부분 트리는 0)"""
    kind, value = _to_lie(factor, d, poisson)
    if kind == "zero":
        return {}
    if kind == "single":
        raise SignConventionError("싱글톤은 괄호 트리가 아닙니다")
    return value


def letter_factor(letter: Letter) -> Factor:
    acc: Factor = letter.core
    for p in reversed(letter.prefix):
        acc = Node(Singleton(p), acc)
    return acc


def word_factor(word: Word) -> Factor:
    acc = letter_factor(word[-1])
    for letter in reversed(word[:-1]):
        acc = Node(letter_factor(letter), acc)
    return acc


def straighten_measure(letter: Letter) -> int:
    """직선화 위치의 최소 괄호 라벨 (접두부 최소값)"""
    return min(letter.prefix) if letter.prefix else letter.min_label


def straighten_letter(letter: Letter, d: int) -> Dict[Letter, int]:
    """최소 라벨이 접두부에 있는 글자를 일반화 Jacobi 관계로 풉니다."""
    if letter.is_straight():
        return {letter: 1}

    m, rest = letter.prefix[0], letter.prefix[1:]
    core_labels = letter.core.labels
    # ad_m 을 가장 안쪽으로 보낸다
    inward = parity_sign((d - 1) * len(rest))
    pool = (m,) + core_labels
    out: Dict[Letter, int] = {}
    for pos, t in enumerate(core_labels, start=1):
        relation = -parity_sign(pos * d)
        new_core = FlatBrace(tuple(l for l in pool if l != t))
        outward = parity_sign((d - 1) * sum(1 for p in rest if p > t))
        new_letter = Letter(tuple(sorted(rest + (t,))), new_core)
        if straighten_measure(new_letter) <= m:
            raise SignConventionError(f"Jacobi 직선화 측도가 증가하지 않았습니다: {letter}")
        _accumulate(out, new_letter, inward * relation * outward)
    return out


def straighten_word(word: Word, d: int, rng: Optional[random.Random] = None) -> LieElement:
    """단어의 모든 글자를 직선화. 꼬리 글자의 라벨 집합은 변하지 않습니다."""
    positions = list(range(len(word)))
    if rng is not None:
        rng.shuffle(positions)

    acc: Dict[Word, int] = {word: 1}
    for j in positions:
        nxt: Dict[Word, int] = {}
        for w, c in acc.items():
            for letter, lc in straighten_letter(w[j], d).items():
                _accumulate(nxt, w[:j] + (letter,) + w[j + 1:], c * lc)
        acc = nxt
    return acc


def straighten_lie(x: LieElement, d: int, rng: Optional[random.Random] = None) -> LieElement:
    out: LieElement = {}
    for word, coeff in x.items():
        for w, c in straighten_word(word, d, rng).items():
            _accumulate(out, w, coeff * c)
    return out


def is_canonical_word(word: Word) -> bool:
    return word[-1].min_label == word_min(word) and all(l.is_straight() for l in word)
