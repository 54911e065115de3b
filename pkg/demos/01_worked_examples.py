"""Walk through the four classic worked cases end to end.

Each case parses an equation, factors the operator through its
characteristic roots, runs the cascade of first-order integrating-factor
solves, and verifies the result by substituting it back symbolically.

Run:  python demos/01_worked_examples.py
"""

from odecascade import parse_ode, particular_solution, render, residual_symbolic

CASES = [
    ("distinct real roots", "y'' + 5y' + 6y = exp(t)*cos(t)"),
    ("repeated roots", "y'' - 4y' + 4y = t^3*exp(2t)"),
    ("complex roots", "y'' - 2y' + 5y = sin(t)"),
    ("log forcing (undetermined coefficients inapplicable)",
     "y'' + 4y' + 4y = exp(-2t)*ln(t)"),
]

for label, text in CASES:
    print("=" * 72)
    print(f"{label}:  {text}")
    ode = parse_ode(text)
    solution, trace = particular_solution(ode)

    print("\n  derivation:")
    for idx, stage in enumerate(trace.stages, start=1):
        print(f"    stage {idx}: solve phi' - ({stage.root})*phi = "
              f"{render(stage.input)}")
        print(f"             phi = {render(stage.output)}")

    print(f"\n  y_p  = {render(solution)}")
    print(f"  latex: {render(solution, 'latex')}")

    residual = residual_symbolic(ode, trace.y_p)
    print(f"  substituting back: residual is {residual.status}")
    print()
