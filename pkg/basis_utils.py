#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""정규형 단항식 열거와 관계 행렬 계수(rank) 오라클

enumerate_basis 는 정규화가 만들어 낼 수 있는 단항식 전체를 나열하고,
oracle_dimension 은 정규화와 독립적으로, 정렬된 중괄호와 싱글톤 위의 모든
날(raw) 괄호 트리를 열로 두고 반대칭, Jacobi, 일반화 Jacobi 관계를 행으로
쌓아 sympy 희소 행렬의 유리수 계수로 차원을 계산합니다. 두 값이 같아야 정규형 집합이 기저입니다.
"""

import itertools
import logging
from collections import Counter
from functools import lru_cache
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

import pandas as pd
from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from algebra_utils import (
    Atom, Factor, FlatBrace, Monomial, Node, Singleton,
    braces_in, factor_degree, monomial_degree, parity_sign, print_monomial, shifted,
)
from error_utils import SignConventionError
from expr_utils import AmbientContext
from lie_utils import Letter, word_factor

logger = logging.getLogger(__name__)

Path = Tuple[int, ...]
Relation = List[Tuple[Factor, int]]


def set_partitions(labels: Sequence[int]) -> Iterator[List[Tuple[int, ...]]]:
    """라벨 집합의 분할. 각 블록은 오름차순, 블록은 최소 라벨 순."""
    labels = tuple(sorted(labels))
    if not labels:
        yield []
        return
    first, rest = labels[0], labels[1:]
    for size in range(len(rest) + 1):
        for mates in itertools.combinations(rest, size):
            remaining = [l for l in rest if l not in mates]
            for tail in set_partitions(remaining):
                yield [(first,) + mates] + tail


# ---------------------------------------------------------------------------
# 정규형 열거
# ---------------------------------------------------------------------------

def _straight_letters(labels: Tuple[int, ...], k: int) -> List[Letter]:
    """최소 라벨을 중괄호에 둔 글자들"""
    if len(labels) < k:
        return []
    low, rest = labels[0], labels[1:]
    letters = []
    for others in itertools.combinations(rest, k - 1):
        prefix = tuple(l for l in rest if l not in others)
        letters.append(Letter(prefix, FlatBrace((low,) + others)))
    return letters


@lru_cache(maxsize=None)
def canonical_trees(labels: Tuple[int, ...], k: int) -> Tuple[Factor, ...]:
    """라벨 블록 위의 정규 괄호 트리 (k >= 3 에서는 맨 중괄호 포함)"""
    if len(labels) < 2:
        return ()
    if k == 2:
        low, rest = labels[0], labels[1:]
        tail = Letter((), Singleton(low))
        return tuple(
            word_factor(tuple(Letter((), Singleton(l)) for l in order) + (tail,))
            for order in itertools.permutations(rest)
        )

    trees: List[Factor] = []
    for parts in set_partitions(labels):
        if any(len(p) < k for p in parts):
            continue
        # 최소 라벨을 가진 블록이 꼬리 글자가 된다
        head_parts = parts[1:]
        for tail in _straight_letters(parts[0], k):
            for choice in itertools.product(*(_straight_letters(p, k) for p in head_parts)):
                for order in itertools.permutations(choice):
                    trees.append(word_factor(tuple(order) + (tail,)))
    return tuple(trees)


def enumerate_basis(ctx: AmbientContext, degree: Optional[int] = None) -> List[Monomial]:
    """정규형 단항식 목록 (차수, 출력 문자열 순)

    Args:
        ctx: 주변 컨텍스트
        degree: 주어지면 그 차수의 단항식만

    Returns:
        List[Monomial]: 인자가 최소 라벨 순으로 정렬된 단항식들
    """
    out: List[Monomial] = []
    for blocks in set_partitions(range(1, ctx.n + 1)):
        options = [
            (Singleton(block[0]),) if len(block) == 1 else canonical_trees(block, ctx.k)
            for block in blocks
        ]
        for factors in itertools.product(*options):
            mono = Monomial(tuple(factors))
            if degree is None or monomial_degree(mono, ctx.d) == degree:
                out.append(mono)
    out.sort(key=lambda m: (monomial_degree(m, ctx.d), print_monomial(m)))
    logger.debug(f"[기저 열거] d={ctx.d}, k={ctx.k}, n={ctx.n}, 차수 {degree}: {len(out)}개")
    return out


# ---------------------------------------------------------------------------
# 날 트리와 관계
# ---------------------------------------------------------------------------

def _has_brace(factor: Factor) -> bool:
    return bool(braces_in(factor))


def _is_admissible(factor: Factor, poisson: bool) -> bool:
    """k >= 3 에서는 모든 괄호 노드 아래에 중괄호가 있어야 한다"""
    if not isinstance(factor, Node):
        return True
    if not poisson and not _has_brace(factor.left) and not _has_brace(factor.right):
        return False
    return _is_admissible(factor.left, poisson) and _is_admissible(factor.right, poisson)


def _trees_over(leaves: Tuple[Atom, ...], poisson: bool) -> List[Factor]:
    if len(leaves) == 1:
        return [leaves[0]]
    trees: List[Factor] = []
    count = len(leaves)
    for size in range(1, count):
        for chosen in itertools.combinations(range(count), size):
            left = tuple(leaves[i] for i in chosen)
            right = tuple(leaves[i] for i in range(count) if i not in chosen)
            for a in _trees_over(left, poisson):
                for b in _trees_over(right, poisson):
                    node = Node(a, b)
                    if _is_admissible(node, poisson):
                        trees.append(node)
    return trees


@lru_cache(maxsize=None)
def raw_trees(labels: Tuple[int, ...], k: int) -> Tuple[Factor, ...]:
    """라벨 블록 위의 모든 날 트리: 잎은 싱글톤과 정렬된 k-중괄호"""
    if len(labels) < 2:
        return ()
    poisson = k == 2
    trees: List[Factor] = []
    for parts in set_partitions(labels):
        if poisson and any(len(p) > 1 for p in parts):
            continue
        if not poisson and any(1 < len(p) != k for p in parts):
            continue
        leaves = tuple(Singleton(p[0]) if len(p) == 1 else FlatBrace(p) for p in parts)
        if len(leaves) == 1 and isinstance(leaves[0], Singleton):
            continue
        trees.extend(_trees_over(leaves, poisson))
    return tuple(trees)


def raw_monomials(ctx: AmbientContext, degree: int) -> List[Monomial]:
    out: List[Monomial] = []
    for blocks in set_partitions(range(1, ctx.n + 1)):
        options = [
            (Singleton(block[0]),) if len(block) == 1 else raw_trees(block, ctx.k)
            for block in blocks
        ]
        for factors in itertools.product(*options):
            mono = Monomial(tuple(factors))
            if monomial_degree(mono, ctx.d) == degree:
                out.append(mono)
    return out


def _nodes(factor: Factor, path: Path = ()) -> Iterator[Tuple[Path, Node]]:
    if isinstance(factor, Node):
        yield path, factor
        yield from _nodes(factor.left, path + (0,))
        yield from _nodes(factor.right, path + (1,))


def _replace(factor: Factor, path: Path, new: Factor) -> Factor:
    if not path:
        return new
    if path[0] == 0:
        return Node(_replace(factor.left, path[1:], new), factor.right)
    return Node(factor.left, _replace(factor.right, path[1:], new))


def local_relations(node: Node, ctx: AmbientContext) -> Iterator[Relation]:
    """노드 하나에서 성립하는 관계들 (각 관계는 (트리, 계수) 목록, 합이 0)"""
    d = ctx.d
    a, b = node.left, node.right
    sa = shifted(factor_degree(a, d), d)
    sb = shifted(factor_degree(b, d), d)

    # 반대칭
    yield [(node, 1), (Node(b, a), parity_sign(sa * sb))]

    # Jacobi
    if isinstance(b, Node):
        y, z = b.left, b.right
        sy = shifted(factor_degree(y, d), d)
        yield [(node, 1), (Node(Node(a, y), z), -1), (Node(y, Node(a, z)), -parity_sign(sa * sy))]

    # 일반화 Jacobi
    if ctx.k >= 3 and isinstance(a, Singleton) and isinstance(b, FlatBrace):
        pool = tuple(sorted((a.label,) + b.labels))
        yield [
            (Node(Singleton(t), FlatBrace(tuple(l for l in pool if l != t))), parity_sign(j * d))
            for j, t in enumerate(pool)
        ]


def relation_rows(columns: Sequence[Monomial], ctx: AmbientContext) -> Iterator[Dict[int, int]]:
    """모든 문맥에서의 관계를 열 번호 위의 희소 행으로"""
    index = {mono: i for i, mono in enumerate(columns)}
    poisson = ctx.k == 2
    for mono in columns:
        for position, factor in enumerate(mono.factors):
            for path, node in _nodes(factor):
                for relation in local_relations(node, ctx):
                    row: Dict[int, int] = {}
                    for tree, coeff in relation:
                        image = _replace(factor, path, tree)
                        if not _is_admissible(image, poisson):
                            continue
                        target = Monomial(mono.factors[:position] + (image,) + mono.factors[position + 1:])
                        if target not in index:
                            raise SignConventionError(f"관계 항이 열 목록에 없습니다: {print_monomial(target)}")
                        column = index[target]
                        value = row.get(column, 0) + coeff
                        if value:
                            row[column] = value
                        else:
                            row.pop(column, None)
                    if row:
                        yield row


def sparse_rank(rows: Iterable[Dict[int, int]], ncols: int) -> int:
    """희소 정수 행들의 유리수 위 계수 (sympy SDM 형식의 DomainMatrix)"""
    nonzero = [{c: QQ(v) for c, v in row.items() if v} for row in rows]
    nonzero = [row for row in nonzero if row]
    if not nonzero:
        return 0
    matrix = DomainMatrix(dict(enumerate(nonzero)), (len(nonzero), ncols), QQ)
    return matrix.rank()


def oracle_dimension(ctx: AmbientContext, degree: int) -> int:
    """날 단항식 공간을 전체 관계로 나눈 몫의 차원"""
    columns = raw_monomials(ctx, degree)
    rank = sparse_rank(relation_rows(columns, ctx), len(columns))
    logger.debug(f"[계수 오라클] d={ctx.d}, k={ctx.k}, n={ctx.n}, 차수 {degree}: 열 {len(columns)}, 계수 {rank}")
    return len(columns) - rank


def degree_table(ctx: AmbientContext, with_oracle: bool = False) -> pd.DataFrame:
    """차수별 정규형 개수 (선택적으로 오라클 차원과 함께)"""
    counts = Counter(monomial_degree(m, ctx.d) for m in enumerate_basis(ctx))
    rows = []
    for deg in sorted(counts):
        row = {"degree": deg, "count": counts[deg]}
        if with_oracle:
            row["oracle"] = oracle_dimension(ctx, deg)
        rows.append(row)
    columns = ["degree", "count"] + (["oracle"] if with_oracle else [])
    return pd.DataFrame(rows, columns=columns)
