# Copyright 2026 The gaitbo Authors
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

"""Regenerates src/opt/sobol_table.cpp from the Joe & Kuo direction numbers.

The 21201-dimension table is read from the copy bundled with SciPy.
"""
import os

import numpy as np
from scipy.stats import qmc

HEADER = open(os.path.join(os.path.dirname(__file__), "header.txt")).read()


def main():
    data = np.load(os.path.join(os.path.dirname(qmc.__file__),
                                "_sobol_direction_numbers.npz"))
    polys, offsets, values = [], [], []
    for p, init in zip(data["poly"], data["vinit"]):
        p = int(p)
        degree = p.bit_length() - 1
        polys.append(p)
        offsets.append(len(values))
        values.extend(int(v) for v in init[:max(degree, 1)])
    offsets.append(len(values))

    def array(name, xs):
        rows = ["  " + ", ".join(str(x) for x in xs[k:k + 16]) + ","
                for k in range(0, len(xs), 16)]
        return "const std::uint32_t %s[] = {\n%s\n};" % (name, "\n".join(rows))

    out = HEADER + "\n// Joe & Kuo \"new-joe-kuo-6.21201\" initial direction numbers.\n"
    out += "// Generated by scripts/gen_sobol_table.py; do not edit.\n\n"
    out += '#include "gaitbo/opt/sobol_table.h"\n\nnamespace gaitbo::opt::detail {\n\n'
    out += "const std::size_t kSobolTableDims = %d;\n\n" % len(polys)
    out += array("kSobolPoly", polys) + "\n\n"
    out += array("kSobolOffset", offsets) + "\n\n"
    out += array("kSobolInit", values) + "\n\n}  // namespace gaitbo::opt::detail\n"
    path = os.path.join(os.path.dirname(__file__), "..", "src", "opt", "sobol_table.cpp")
    with open(path, "w") as f:
        f.write(out)


if __name__ == "__main__":
    main()
