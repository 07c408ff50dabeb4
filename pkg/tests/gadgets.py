"""Hand-built kernels whose length-3 augmenting paths have known types.

Kernel degree d=10, eps=0.1, s=0.2, index 1: SH >= 9, H in 6..8, M in 3..5,
L <= 2. Degrees are padded with matched filler pairs so the kernel matching
stays maximum.
"""

D, EPS, S, IDX = 10, 0.1, 0.2, 1

# (deg v1, deg v2, e1 in kernel) per type; v3 has degree 9, v4 degree 0
PATH_SHAPES = {
    "1": (1, 9, True),
    "2": (1, 6, True),
    "3": (3, 6, True),
    "4": (3, 3, True),
    "if": (3, 9, True),  # v1 medium next to a super-high v2 fits no type
}


class GadgetBuilder:
    def __init__(self):
        self.n = 0
        self.kernel = []
        self.m = []
        self.mstar = []
        self.extra = []  # graph edges outside the kernel

    def node(self):
        self.n += 1
        return self.n - 1

    def pad(self, v, k):
        for _ in range(k):
            f, g = self.node(), self.node()
            self.kernel += [(min(v, f), max(v, f)), (f, g)]
            self.m.append((f, g))
            self.mstar.append((f, g))

    def path(self, kind):
        d1, d2, e1_in = PATH_SHAPES[kind]
        v1, v2, v3, v4 = (self.node() for _ in range(4))
        self.kernel += [(v2, v3)]
        self.m.append((v2, v3))
        self.mstar += [(v1, v2), (v3, v4)]
        self.extra.append((v3, v4))
        used1 = used2 = 0
        if e1_in:
            self.kernel.append((v1, v2))
            used1 = used2 = 1
        else:
            self.extra.append((v1, v2))
        self.pad(v1, d1 - used1)
        self.pad(v2, d2 - used2 - 1)
        self.pad(v3, 9 - 1)
        return (v1, v2, v3, v4)


def build(counts):
    g = GadgetBuilder()
    paths = []
    for kind, c in counts.items():
        for _ in range(c):
            paths.append((g.path(kind), kind))
    return g, paths
