"""Set-partition counting by recursive insertion, independent of the library's enumerator."""


def partitions(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for p in partitions(rest):
        yield [[first]] + p
        for i in range(len(p)):
            yield p[:i] + [[first] + p[i]] + p[i + 1:]


def count_partitions(n: int) -> int:
    return sum(1 for _ in partitions(list(range(n))))
