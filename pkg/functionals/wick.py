#!/usr/bin/env python3
"""
Перечисление схем свертки Вика с точными целыми кратностями

Схема свертки двух членов - матрица k_ab ≥ 0 (сколько ножек вершины a первого
множителя свернуто с ножками вершины b второго). Число способов
    Π_a p_a!/(p_a - r_a)! · Π_b q_b!/(q_b - c_b)! / Π_ab k_ab!,
r_a, c_b - суммы по строке и столбцу.

Гауссово спаривание всех ножек одного члена (тепловая редукция) - симметричная
матрица e_ij, i < j, плюс s_i пар внутри вершины i; число способов
    Π p_i! / (Π e_ij! · Π s_i! 2^{s_i}).
"""

import math
from typing import Iterator, List, Sequence, Tuple

Pattern = Tuple[Tuple[int, int, int], ...]


def _falling(n: int, k: int) -> int:
    return math.factorial(n) // math.factorial(n - k)


def contraction_count(powers_a: Sequence[int], powers_b: Sequence[int], pattern: Pattern) -> int:
    rows = [0] * len(powers_a)
    cols = [0] * len(powers_b)
    denominator = 1
    for a, b, k in pattern:
        rows[a] += k
        cols[b] += k
        denominator *= math.factorial(k)
    numerator = 1
    for p, r in zip(powers_a, rows):
        numerator *= _falling(p, r)
    for q, c in zip(powers_b, cols):
        numerator *= _falling(q, c)
    return numerator // denominator


def contraction_patterns(powers_a: Sequence[int], powers_b: Sequence[int]) -> Iterator[Tuple[Pattern, int]]:
    """
    Все схемы свертки (включая пустую) с числом способов.
    Порядок детерминирован: ячейки (a, b) обходятся лексикографически.
    """
    cells = [(a, b) for a in range(len(powers_a)) for b in range(len(powers_b))
             if powers_a[a] > 0 and powers_b[b] > 0]
    left = list(powers_a)
    right = list(powers_b)
    chosen: List[Tuple[int, int, int]] = []

    def backtrack(position: int):
        if position == len(cells):
            pattern = tuple(chosen)
            yield pattern, contraction_count(powers_a, powers_b, pattern)
            return
        a, b = cells[position]
        for k in range(min(left[a], right[b]) + 1):
            if k:
                chosen.append((a, b, k))
                left[a] -= k
                right[b] -= k
            yield from backtrack(position + 1)
            if k:
                chosen.pop()
                left[a] += k
                right[b] += k

    yield from backtrack(0)


def gaussian_pairings(powers: Sequence[int]) -> Iterator[Tuple[Pattern, Tuple[Tuple[int, int], ...], int]]:
    """
    Полные спаривания ножек: (ребра (i, j, e_ij), i < j; самоспаривания (i, s_i); число способов).
    Пустая последовательность степеней дает одно пустое спаривание.
    """
    n = len(powers)
    remaining = list(powers)
    edges: List[Tuple[int, int, int]] = []
    selfs: List[Tuple[int, int]] = []

    def count() -> int:
        numerator = 1
        for p in powers:
            numerator *= math.factorial(p)
        denominator = 1
        for _, _, e in edges:
            denominator *= math.factorial(e)
        for _, s in selfs:
            denominator *= math.factorial(s) * 2 ** s
        return numerator // denominator

    def assign(i: int, j: int):
        # распределение оставшихся ножек вершины i: пары с j > i, затем самоспаривания
        if j == n:
            if remaining[i] % 2:
                return
            s = remaining[i] // 2
            if s:
                selfs.append((i, s))
            saved = remaining[i]
            remaining[i] = 0
            yield from assign(i + 1, i + 2) if i + 1 < n else finish()
            remaining[i] = saved
            if s:
                selfs.pop()
            return
        for e in range(min(remaining[i], remaining[j]) + 1):
            if e:
                edges.append((i, j, e))
                remaining[i] -= e
                remaining[j] -= e
            yield from assign(i, j + 1)
            if e:
                edges.pop()
                remaining[i] += e
                remaining[j] += e

    def finish():
        yield tuple(edges), tuple(selfs), count()

    if n == 0:
        yield (), (), 1
        return
    yield from assign(0, 1)


def pairing_count_bruteforce(powers_a: Sequence[int], powers_b: Sequence[int]) -> dict:
    """
    Перебор по ножкам: для каждого частичного паросочетания ножек A с ножками B
    считается матрица k_ab. Независимая проверка contraction_patterns.
    """
    legs_a = [a for a, p in enumerate(powers_a) for _ in range(p)]
    legs_b = [b for b, q in enumerate(powers_b) for _ in range(q)]
    counts: dict = {}

    def walk(i: int, used: List[bool], cells: dict):
        if i == len(legs_a):
            key = tuple(sorted((a, b, k) for (a, b), k in cells.items()))
            counts[key] = counts.get(key, 0) + 1
            return
        walk(i + 1, used, cells)
        for j, b in enumerate(legs_b):
            if used[j]:
                continue
            used[j] = True
            cell = (legs_a[i], b)
            cells[cell] = cells.get(cell, 0) + 1
            walk(i + 1, used, cells)
            cells[cell] -= 1
            if not cells[cell]:
                del cells[cell]
            used[j] = False

    walk(0, [False] * len(legs_b), {})
    return counts
