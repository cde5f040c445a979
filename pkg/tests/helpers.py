"""Small construction helpers shared across test modules."""

from hypothesis import strategies as st

from gammachain.partition import Interval, StrategyPartition


def make_partition(boundaries):
    return StrategyPartition(
        tuple(
            Interval(boundaries[i], boundaries[i + 1], f"S{i}")
            for i in range(len(boundaries) - 1)
        )
    )


def grid_partitions(max_cuts=5):
    """Random contiguous partitions with boundaries on a 1/1000 grid."""
    return (
        st.lists(
            st.integers(min_value=1, max_value=999),
            min_size=1,
            max_size=max_cuts,
            unique=True,
        )
        .map(lambda cuts: [0.0] + sorted(c / 1000 for c in cuts) + [1.0])
        .map(make_partition)
    )
