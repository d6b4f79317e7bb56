"""Collects one verdict per acceptance criterion for the end-of-run summary."""

RESULTS = {}


def record(number, title, ok, detail):
    RESULTS[number] = (title, bool(ok), detail)
    print(format_line(number))
    return ok


def format_line(number):
    title, ok, detail = RESULTS[number]
    return f"criterion {number:>2} {'PASS' if ok else 'FAIL'}: {title} ({detail})"
