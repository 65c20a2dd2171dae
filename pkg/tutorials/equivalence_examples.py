from pathlib import Path
import sys
import os

parent_dir = str((Path(__file__).resolve()).parent.parent)
if parent_dir not in sys.path:
    sys.path.append(parent_dir)

import main

os.chdir(parent_dir)

# Binomial self-map of D_{2,1}(w) over F_3[X]/(X^4 + 2X^3 + 2)
args = ["-o", "tmp", "-f", "tests/configurations/equiv_quartic.yml"]
provisional = main.main(args)
print(provisional["outputs"]["witness"])

# D_{2,1}(w) against the twisted Gabidulin codes H_{2,1}(eta, 2)
for t in (1, 3, 5, 7, 9):
    args = ["equiv", "-o", "tmp", "--gamma", "w", "--right", "H:2:1:w^{}:2".format(t)]
    report = main.main(args)
    print(report["outputs"]["right"], report["outputs"]["verdict"], report["outputs"]["prunes"])

# Inequivalent pair over F_(5^6), cross-checked against the closed-form condition
args = ["-o", "tmp", "-f", "tests/configurations/equiv_theorem5.yml"]
provisional = main.main(args)
print(provisional["outputs"]["verdict"], provisional["outputs"]["theorem"])
