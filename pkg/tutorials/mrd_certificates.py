from pathlib import Path
import sys
import os

parent_dir = str((Path(__file__).resolve()).parent.parent)
if parent_dir not in sys.path:
    sys.path.append(parent_dir)

import main

os.chdir(parent_dir)

# MRD certificate for every valid gamma = w^t, t < 10, over F_81
for t in (1, 3, 5, 7, 9):
    for s in (1, 3):
        args = ["mrd", "-o", "tmp", "--k", "2", "--s", str(s), "--gamma", "w^{}".format(t)]
        report = main.main(args)
        print(report["outputs"]["label"], report["outputs"]["min_distance"])
