"""Collects one pass/fail line per acceptance criterion for the terminal summary."""
LINES = []


def record(num, name, ok, detail=""):
    tag = "PASS" if ok else "FAIL"
    line = f"[{tag}] criterion {num:2d} {name}"
    if detail:
        line += f": {detail}"
    LINES.append(line)
    print(line)
    return ok
