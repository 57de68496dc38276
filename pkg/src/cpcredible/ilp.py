"""Export a sample based problem as an integer program in CPLEX LP text format.

Variables: ``U<i>`` is 1 iff time point ``i`` is in the region, ``F<j>`` is 1
iff sample ``j`` (1-based, canonical sample order with multiplicities
expanded) is covered.
"""

from ._validation import check_alpha, coverage_threshold


def _linear(terms):
    out, line = [], ""
    for k, (coef, var) in enumerate(terms):
        sign = "-" if coef < 0 else "+"
        mag = abs(coef)
        piece = f"{sign} {'' if mag == 1 else f'{mag} '}{var}"
        if k == 0 and sign == "+":
            piece = piece[2:]
        if len(line) + len(piece) > 200:
            out.append(line)
            line = ""
        line = f"{line} {piece}" if line else piece
    out.append(line)
    return "\n   ".join(out)


def format_ilp(samples, alpha):
    alpha = check_alpha(alpha)
    need = coverage_threshold(samples.m, alpha)
    expanded = samples.expanded()
    cov = {i: [] for i in range(1, samples.n + 1)}
    for j, cfg in enumerate(expanded, start=1):
        for i in cfg:
            cov[i].append(j)

    lines = [f"\\ sample based problem: n={samples.n} m={samples.m} alpha={alpha}",
             "\\ sum F_j >= m(1-alpha) is written with its integer ceiling",
             "Minimize",
             " region_size: " + _linear([(1, f"U{i}") for i in range(1, samples.n + 1)]),
             "Subject To",
             " coverage: " + _linear([(1, f"F{j}") for j in range(1, samples.m + 1)]) + f" >= {need}"]
    # sum_{j in cov(i)} (1 - F_j) >= |cov(i)| (1 - U_i), rearranged
    for i, js in cov.items():
        if js:
            terms = [(len(js), f"U{i}")] + [(-1, f"F{j}") for j in js]
            lines.append(f" drop_{i}: " + _linear(terms) + " >= 0")
    lines.append("Binary")
    names = [f"U{i}" for i in range(1, samples.n + 1)] + [f"F{j}" for j in range(1, samples.m + 1)]
    for k in range(0, len(names), 20):
        lines.append(" " + " ".join(names[k:k + 20]))
    lines.append("End")
    return "\n".join(lines) + "\n"


def export_ilp(samples, alpha, path):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_ilp(samples, alpha))
