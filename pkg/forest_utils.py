#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""k-숲 조합론과 부호 검증

사각 정점(라벨 k-1개, 차수 (k-2)d), 원 정점(라벨 하나), 방향 간선(차수 d-1),
그리고 순서 있는 방향 집합으로 이루어진 k-숲을 다룹니다. 중괄호 안 중괄호
전개의 마지막 항 부호를 두 가지 독립된 방법으로 계산하여 비교합니다.
"""

import logging
from dataclasses import dataclass, field, replace
from typing import FrozenSet, List, Sequence, Tuple

from algebra_utils import GradedMarker, ordering_sign, parity_sign
from error_utils import ForestError, SignConventionError
from rewrite_utils import brace_in_brace_coefficient

logger = logging.getLogger(__name__)

# 정점 참조: ("square", 인덱스) 또는 ("round", 라벨)
VertexRef = Tuple[str, int]
# 방향 집합 항목: ("edge", 인덱스) 또는 ("square", 인덱스)
OrientationItem = Tuple[str, int]


@dataclass(frozen=True)
class Edge:
    source: VertexRef
    target: VertexRef

    def reversed(self) -> "Edge":
        return Edge(self.target, self.source)

    def square_end(self) -> VertexRef:
        return self.source if self.source[0] == "square" else self.target

    def round_end(self) -> VertexRef:
        return self.source if self.source[0] == "round" else self.target


@dataclass(frozen=True)
class Forest:
    n: int
    k: int
    squares: Tuple[FrozenSet[int], ...]
    rounds: Tuple[int, ...]
    edges: Tuple[Edge, ...]
    orientation: Tuple[OrientationItem, ...]


def validate_forest(forest: Forest) -> None:
    """국소 허용 조건 검사

    Raises:
        ForestError: 조건 위반 시
    """
    for index, square in enumerate(forest.squares):
        if len(square) != forest.k - 1:
            raise ForestError(f"사각 정점 {index} 의 라벨 수 {len(square)} != k-1 = {forest.k - 1}")

    seen: List[int] = [l for s in forest.squares for l in s] + list(forest.rounds)
    if sorted(seen) != list(range(1, forest.n + 1)):
        raise ForestError("각 라벨 1..n 은 정확히 한 정점에 있어야 합니다")

    round_degree = {r: 0 for r in forest.rounds}
    square_degree = [0] * len(forest.squares)
    for edge in forest.edges:
        kinds = {edge.source[0], edge.target[0]}
        if kinds != {"square", "round"}:
            raise ForestError(f"간선은 사각 정점과 원 정점을 이어야 합니다: {edge}")
        sq, rd = edge.square_end(), edge.round_end()
        if not 0 <= sq[1] < len(forest.squares) or rd[1] not in round_degree:
            raise ForestError(f"존재하지 않는 정점을 잇는 간선: {edge}")
        round_degree[rd[1]] += 1
        square_degree[sq[1]] += 1

    if any(v > 1 for v in round_degree.values()):
        raise ForestError("원 정점은 많아야 하나의 사각 정점에 이어집니다")
    if any(v == 0 for v in square_degree):
        raise ForestError("사각 정점은 적어도 하나의 원 정점에 이어져야 합니다")

    expected = sorted([("edge", i) for i in range(len(forest.edges))] +
                      [("square", i) for i in range(len(forest.squares))])
    if sorted(forest.orientation) != expected or len(set(forest.orientation)) != len(forest.orientation):
        raise ForestError("방향 집합은 모든 간선과 사각 정점을 정확히 한 번씩 포함해야 합니다")


def _item_degree(forest: Forest, item: OrientationItem, d: int) -> int:
    return (forest.k - 2) * d if item[0] == "square" else d - 1


def forest_degree(forest: Forest, d: int) -> int:
    """사각 정점 (k-2)d 와 간선 d-1 의 합"""
    validate_forest(forest)
    return len(forest.squares) * (forest.k - 2) * d + len(forest.edges) * (d - 1)


def reverse_edge(forest: Forest, edge_index: int, d: int) -> Tuple[Forest, int]:
    """간선 방향을 뒤집습니다. 부호 (-1)^d"""
    if not 0 <= edge_index < len(forest.edges):
        raise ForestError(f"알 수 없는 간선 {edge_index}")
    edges = list(forest.edges)
    edges[edge_index] = edges[edge_index].reversed()
    return replace(forest, edges=tuple(edges)), parity_sign(d)


def reorder_orientation(forest: Forest, new_order: Sequence[OrientationItem], d: int) -> Tuple[Forest, int]:
    """방향 집합 재배열과 그 Koszul 부호"""
    new_order = tuple(new_order)
    if sorted(new_order) != sorted(forest.orientation) or len(set(new_order)) != len(new_order):
        raise ForestError("새 순서가 방향 집합의 순열이 아닙니다")

    def markers(items):
        return [GradedMarker(f"{kind}{index}", _item_degree(forest, (kind, index), d)) for kind, index in items]

    sign = ordering_sign(markers(forest.orientation), markers(new_order))
    return replace(forest, orientation=new_order), sign


def psi_brace_coefficient(k: int, d: int, slot: int) -> int:
    """중괄호 {x1..xk} 짝짓기에서 slot 번째 라벨이 원 정점인 나무의 계수"""
    if not 1 <= slot <= k:
        raise ForestError(f"슬롯 {slot} 가 범위 1..{k} 를 벗어났습니다")
    return parity_sign((slot - 1) * d)


def one_square_tree(n: int, k: int, square: Sequence[int], round_label: int,
                    outward: bool = True) -> Forest:
    """사각 정점 하나와 원 정점 하나를 잇는 나무 (나머지 라벨은 고립된 원 정점)"""
    square_set = frozenset(square)
    rounds = tuple(l for l in range(1, n + 1) if l not in square_set)
    edge = Edge(("square", 0), ("round", round_label))
    if not outward:
        edge = edge.reversed()
    return Forest(n, k, (square_set,), rounds, (edge,), (("square", 0), ("edge", 0)))


def psi_brace_pairing(labels: Sequence[int], d: int) -> dict:
    """임의 순서로 쓴 중괄호와 짝지어지는 한 사각 나무들의 계수

    Returns:
        dict: 원 정점 라벨 -> 계수. 사각 정점의 라벨 순서에 따른
              부호 (-1)^{d·inv} 를 포함합니다.
    """
    k = len(labels)
    pairing = {}
    for slot, label in enumerate(labels, start=1):
        rest = [l for l in labels if l != label]
        inversions = sum(1 for a in range(len(rest)) for b in range(a + 1, len(rest)) if rest[a] > rest[b])
        pairing[label] = psi_brace_coefficient(k, d, slot) * parity_sign(inversions * d)
    return pairing


# ---------------------------------------------------------------------------
# 부호 장부
# ---------------------------------------------------------------------------

@dataclass
class SignLedger:
    """기본 부호 이동들의 순서 있는 기록"""
    steps: List[Tuple[str, int]] = field(default_factory=list)
    checks: List[Tuple[str, int, int]] = field(default_factory=list)
    notes: List[Tuple[str, int, int]] = field(default_factory=list)

    @property
    def product(self) -> int:
        sign = 1
        for _, s in self.steps:
            sign *= s
        return sign

    def record(self, description: str, sign: int) -> int:
        self.steps.append((description, sign))
        logger.debug(f"[부호 장부] {description}: {sign:+d} (누적 {self.product:+d})")
        return self.product

    def check(self, name: str, expected: int, observed: int) -> None:
        self.checks.append((name, expected, observed))

    def note(self, name: str, stated: int, used: int) -> None:
        """문헌에 적힌 값과 장부가 쓰는 값을 나란히 남깁니다. 일치 여부에는 관여하지 않습니다."""
        self.notes.append((name, stated, used))
        if stated != used:
            logger.debug(f"[부호 장부] {name}: 적힌 값 {stated:+d}, 사용 값 {used:+d}")

    @property
    def consistent(self) -> bool:
        return all(expected == observed for _, expected, observed in self.checks)

    def to_dict(self) -> dict:
        return {
            "steps": [{"description": text, "sign": s} for text, s in self.steps],
            "product": self.product,
            "checks": [{"name": n, "expected": e, "observed": o} for n, e, o in self.checks],
            "notes": [{"name": n, "stated": s, "used": u} for n, s, u in self.notes],
            "consistent": self.consistent,
        }


def verify_theorem_sign(k1: int, k2: int, d: int) -> SignLedger:
    """중괄호 안 중괄호 전개의 마지막 항 부호를 두 방법으로 계산합니다.

    Args:
        k1: 바깥 중괄호 인자 수 (>= 3)
        k2: 안쪽 중괄호 인자 수 (>= 3)
        d: 공간 차원 (>= 2)

    Returns:
        SignLedger: 단계별 부호와 교차 확인 결과

    Raises:
        SignConventionError: 두 계산이 다를 때
    """
    if k1 < 3 or k2 < 3 or d < 2:
        raise ForestError(f"k1, k2 >= 3, d >= 2 이어야 합니다 (k1={k1}, k2={k2}, d={d})")

    last = k1 + k2 - 1        # 가장 큰 라벨
    k = k1 + k2 - 2           # 합성된 중괄호의 인자 수
    pivot = k1 - 1            # 바깥 중괄호의 마지막 싱글톤
    ledger = SignLedger()

    # [x_last, {x1..x_{last-1}}] 와 짝지어지는 나무: 원 정점 last -> 사각 -> 원 정점 pivot
    square = [l for l in range(1, last) if l != pivot]
    tree = Forest(
        n=last, k=k,
        squares=(frozenset(square),),
        rounds=(pivot, last),
        edges=(Edge(("round", last), ("square", 0)), Edge(("square", 0), ("round", pivot))),
        orientation=(("edge", 0), ("square", 0), ("edge", 1)),
    )
    validate_forest(tree)

    ledger.record("기본 짝짓기", psi_brace_coefficient(last - 1, d, pivot))
    tree, sign = reverse_edge(tree, 0, d)
    ledger.record("화살표 뒤집기", sign)
    tree, sign = reorder_orientation(tree, (("square", 0), ("edge", 1), ("edge", 0)), d)
    right_side = ledger.record("방향 집합 재배열", sign)
    ledger.check("오른쪽 교차", parity_sign(k1 * d - 1), right_side)

    ledger.record("마지막 항 계수", brace_in_brace_coefficient(k1, last, d))
    total = ledger.product
    ledger.check("전체 부호", parity_sign((k1 + k2 - 1) * d - 1), total)

    # 두 구면의 곱과 k1-나무, k2-나무의 짝짓기
    left_tree = one_square_tree(k1, k1, [l for l in range(1, k1 + 1) if l != pivot], pivot)
    right_tree = one_square_tree(k2, k2, list(range(1, k2)), k2)
    validate_forest(left_tree)
    validate_forest(right_tree)

    # 바깥 구면의 여방향은 -1
    left = -psi_brace_coefficient(k1, d, pivot)
    right = psi_brace_coefficient(k2, d, k2)
    concatenated = [
        GradedMarker("square1", (k1 - 2) * d), GradedMarker("edge1", d - 1),
        GradedMarker("square2", (k2 - 2) * d), GradedMarker("edge2", d - 1),
    ]
    pulled = [concatenated[0], concatenated[2], concatenated[1], concatenated[3]]
    pull = ordering_sign(concatenated, pulled)
    ledger.check("왼쪽 나무", parity_sign(k1 * d - 1), left)
    ledger.check("오른쪽 나무", parity_sign((k2 - 1) * d), right)
    ledger.note("오른쪽 나무", parity_sign(k2 * d - d - 1), right)
    ledger.note("왼쪽 나무 여방향", 1, -1)
    ledger.check("사각 정점 당기기", 1, pull)
    ledger.check("두 계산의 일치", total, left * right * pull)

    if not ledger.consistent:
        failed = [name for name, e, o in ledger.checks if e != o]
        raise SignConventionError(f"부호 장부 불일치 (k1={k1}, k2={k2}, d={d}): {failed}")
    return ledger
