# Copyright 2026 The thermoq Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Log-log plot of the precision bound from scaling-he / scaling-deph CSVs.

usage: python docs/plot_scaling.py results/scaling-he.csv results/scaling-deph.csv -o scaling.png
"""

import argparse

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np
import pandas as pd


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("csv", nargs="+")
    ap.add_argument("-o", "--output", default="scaling.png")
    args = ap.parse_args()

    fig, ax = plt.subplots(figsize=(5, 4))
    for path in args.csv:
        df = pd.read_csv(path, comment="#")
        df = df[df["error"].isna()]
        slope = np.polyfit(np.log(df["beta"]), np.log(df["bound"]), 1)[0]
        ax.loglog(df["beta"], df["bound"], "o-", label=f"{path} (slope {slope:.3f})")
    ax.set_xlabel("beta")
    ax.set_ylabel("Delta beta / beta")
    ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(args.output, dpi=150)


if __name__ == "__main__":
    main()
