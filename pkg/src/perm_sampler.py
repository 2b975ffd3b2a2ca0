"""
Module for drawing arc permutations in various ways for closure evaluation.
"""

import random
from typing import Callable, Dict, List, Optional, Sequence

from .perm import cyclic_shift, is_cyclic_shift
from .rearrange import Perm


class PermutationSampler:
    """
    Class for drawing permutations of k arcs with different strategies.
    Supports uniform draws as well as draws restricted to or excluded from Z_k.
    """

    def __init__(self, seed: Optional[int] = None):
        """
        Initialize the sampler with an optional random seed.

        Args:
            seed: Random seed for reproducibility.
        """
        self.random = random.Random(seed)

    def random_perm(self, k: int) -> Perm:
        values = list(range(1, k + 1))
        self.random.shuffle(values)
        return Perm(tuple(values))

    def reverse(self, k: int) -> Perm:
        return Perm(tuple(range(k, 0, -1)))

    def adjacent_swap(self, k: int) -> Perm:
        """
        Swap one random pair of neighbouring arcs of the identity.

        Args:
            k: Number of arcs (at least 2)

        Returns:
            A transposition of adjacent arcs
        """
        if k < 2:
            raise ValueError(f"adjacent_swap needs k >= 2, got {k}")
        values = list(range(1, k + 1))
        i = self.random.randint(0, k - 2)
        values[i], values[i + 1] = values[i + 1], values[i]
        return Perm(tuple(values))

    def cyclic(self, k: int) -> Perm:
        return cyclic_shift(k, self.random.randrange(k))

    def non_cyclic(self, k: int) -> Perm:
        """
        Draw uniformly from S_k minus Z_k by rejection.

        Args:
            k: Number of arcs (at least 3)

        Returns:
            A permutation that is not a cyclic shift
        """
        if k < 3:
            raise ValueError(f"every permutation of {k} arcs is a cyclic shift")
        while True:
            sigma = self.random_perm(k)
            if not is_cyclic_shift(sigma):
                return sigma

    def with_fixed_positions(self, k: int, fixed_positions: Sequence[int]) -> Perm:
        """
        Shuffle arcs while keeping some positions fixed.

        Args:
            k: Number of arcs
            fixed_positions: Positions (1-based) whose arc stays in place

        Returns:
            A permutation fixing the given positions
        """
        fixed = {pos for pos in fixed_positions if 1 <= pos <= k}
        movable = [i for i in range(1, k + 1) if i not in fixed]
        shuffled = movable.copy()
        self.random.shuffle(shuffled)
        placement = dict(zip(movable, shuffled))
        return Perm(tuple(i if i in fixed else placement[i] for i in range(1, k + 1)))

    def create_strategies(self) -> Dict[str, Callable[[int], Perm]]:
        """
        Create a dictionary of different sampling strategies.

        Returns:
            Dictionary mapping strategy names to sampling functions
        """
        return {
            "random": self.random_perm,
            "reverse": self.reverse,
            "adjacent_swap": self.adjacent_swap,
            "cyclic": self.cyclic,
            "non_cyclic": self.non_cyclic,
            "fix_first": lambda k: self.with_fixed_positions(k, [1]),
        }

    def apply_strategy(self, k: int, strategy: str) -> Perm:
        """
        Draw a permutation of k arcs with a named strategy.

        Args:
            k: Number of arcs
            strategy: Name of the strategy to apply

        Returns:
            The drawn permutation
        """
        strategies = self.create_strategies()

        if strategy not in strategies:
            raise ValueError(
                f"Unknown sampling strategy: {strategy}. "
                f"Available strategies: {list(strategies.keys())}"
            )

        return strategies[strategy](k)

    def sample(self, k: int, strategy: str, count: int) -> List[Perm]:
        return [self.apply_strategy(k, strategy) for _ in range(count)]
