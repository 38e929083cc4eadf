"""Shared test utilities: independent oracles and random-input generators."""

import random

from quatfhe.circuit import Add, Constant, Mul, Variable
from quatfhe.numtheory import RandomSource
from quatfhe.quaternion import Quaternion, q_random


def trial_division(n: int, bound: int = 10 ** 6) -> bool:
    """Primality by trial division up to bound (oracle for small factors)."""
    if n < 2:
        return False
    f = 2
    while f * f <= n and f <= bound:
        if n % f == 0:
            return False
        f += 1
    return True


def random_quaternion_pair(rand: random.Random, modulus):
    src = RandomSource(seed=rand.randrange(2 ** 62))
    return q_random(src, modulus), q_random(src, modulus)


def quaternion_from(coeffs, modulus) -> Quaternion:
    a, b, c, d = coeffs
    return Quaternion(a, b, c, d, modulus)


def random_expr(rand: random.Random, max_nodes: int, max_mul_depth: int,
                names, const_bound: int):
    """Random expression within the given node and mul-depth budgets."""

    def leaf():
        if rand.random() < 0.5:
            return Variable(rand.choice(names))
        return Constant(rand.randrange(const_bound))

    def build(nodes_budget: int, mul_budget: int):
        if nodes_budget < 3 or rand.random() < 0.3:
            return leaf()
        left_budget = rand.randint(1, nodes_budget - 2)
        right_budget = nodes_budget - 1 - left_budget
        if mul_budget > 0 and rand.random() < 0.5:
            return Mul(build(left_budget, mul_budget - 1),
                       build(right_budget, mul_budget - 1))
        return Add(build(left_budget, mul_budget),
                   build(right_budget, mul_budget))

    return build(max_nodes, max_mul_depth)


def mul_chain(depth: int, names, rand: random.Random):
    """Expression whose spine stacks `depth` Mul nodes (Adds interleaved)."""
    expr = Variable(rand.choice(names))
    for i in range(depth):
        expr = Mul(expr, Variable(rand.choice(names)))
        if i % 3 == 0:
            expr = Add(expr, Constant(rand.randrange(50)))
    return expr
