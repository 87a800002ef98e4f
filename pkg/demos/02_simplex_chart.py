"""The non-Ingleton cone and its base simplex.

The cone cut out of the Shannon cone by reversing one Ingleton inequality is
simplicial: fifteen vertices a1..a15 with dual covectors alpha_1..alpha_15.
Fourteen vertices come from Abelian groups; a15 is the special ray spc.
"""
from entrocone.geometry.chart import (alpha_coords, expanded, ning_chart,
                                      printed_row_certificate, verify_chart)
from entrocone.geometry.vectors import ingleton_vectors, pair, spc

chart = ning_chart()
for i in range(15):
    a, alpha, tag, rep = chart.row(i + 1)
    print(f"a{i + 1:<2} {str(a):<44} {alpha.name:<14} {tag}")

report = verify_chart()
print("\nall checks pass:", report.passed)
for note in report.notes:
    print(" ", note)

w, v = printed_row_certificate(3)
print("\nthe a3 row as tabulated breaks monotonicity:", expanded(w), "=", v)

print("\n<spc, ing(12;34)> =", pair(spc(), ingleton_vectors()[0]))
print("alpha coordinates of spc:", [str(x) for x in alpha_coords(spc())])
