"""Bin geometry: signed distances of container centers from the aircraft center."""

from fractions import Fraction

from alopt.exceptions import BinIndexError, SpecError


def bin_domain(size: int, bin_count: int) -> range:
    """Valid bins for a container size; size 3 straddles j and j+1."""
    if size == 3:
        return range(1, bin_count)
    return range(1, bin_count + 1)


def signed_distance(size: int, j: int, bin_count: int) -> Fraction:
    """Signed distance d[s, j] of a container center from x = 0, as a fraction of L.

    Args:
        size: Container size (1, 2 or 3)
        j: 1-based bin index (for size 3, the first of the two occupied bins)
        bin_count: Number of bins N

    Returns:
        (2j - N - 1) / 2N for sizes 1 and 2, (2j - N) / 2N for size 3

    Raises:
        BinIndexError: If j is outside the domain of the size
    """
    if size not in (1, 2, 3):
        raise SpecError("size", f"{size} not in {{1, 2, 3}}")
    if j not in bin_domain(size, bin_count):
        raise BinIndexError(size, j, bin_count)
    offset = bin_count if size == 3 else bin_count + 1
    return Fraction(2 * j - offset, 2 * bin_count)
