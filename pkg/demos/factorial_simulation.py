"""Verify a two-factor assignment procedure before launching it.

Sweeps the signup-button script over 60,000 cookieids and prints the
empirical distribution of each factor, the six joint cells, and a
goodness-of-fit statistic against the intended design.
"""

from planout.corpus import get
from planout.simulator import chi_square, independence_table, simulate

script = get("signup_factorial")
print(script.source)

report = simulate(script.ir, "cookieid", n=60000,
                  pairs=[("button_color", "button_text")])
print(report.table())
print()

joint = report.joint_frequencies("button_color", "button_text")
expected = []
observed = []
for color in ("#3c539a", "#5f9647", "#b33316"):
    for text, p in (("Sign up", 0.8), ("Join now", 0.2)):
        expected.append(p / 3)
        observed.append(round(joint[(color, text)] * report.n))

statistic, dof = chi_square(observed, expected)
print(f"chi-square vs intended design: {statistic:.2f} on {dof} dof")
print("independence gap (color vs text): "
      f"{independence_table(report, 'button_color', 'button_text'):.4f}")
