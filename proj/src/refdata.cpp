// Copyright 2026 The backaction-sim authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "backaction/refdata.hpp"

namespace backaction::refdata {

const char *const kProcessSweepSource =
    "experiment supplement, table 'different coherent process' "
    "(beta/theta/C calibration rows with measured fidelities)";

const std::array<ProcessSweepRow, 16> kProcessSweep = {{
    {0.0, 0.0, 0.0, 1.00, 1.00},
    {3.0, 4.24, 0.147, 0.997, 0.997},
    {6.0, 8.454, 0.291, 0.991, 0.990},
    {9.0, 12.6, 0.426, 0.982, 0.978},
    {12.0, 16.7, 0.551, 0.974, 0.960},
    {15.0, 20.7, 0.661, 0.975, 0.938},
    {18.0, 24.6, 0.756, 0.966, 0.910},
    {21.0, 28.2, 0.834, 0.963, 0.883},
    {24.0, 31.7, 0.894, 0.968, 0.850},
    {27.0, 34.9, 0.938, 0.968, 0.822},
    {30.0, 37.8, 0.968, 0.974, 0.790},
    {33.0, 40.2, 0.986, 0.977, 0.740},
    {36.0, 42.3, 0.995, 0.984, 0.732},
    {39.0, 43.8, 0.999, 0.991, 0.720},
    {42.0, 44.7, 1.00, 0.997, 0.708},
    {45.0, 45.0, 1.00, 0.998, 0.706},
}};

const char *const kStateSweepSource =
    "experiment supplement, table 'states with various initial coherence' "
    "(alpha/p0 rows with measured fidelities, fixed theta = 30 deg)";

const std::array<StateSweepRow, 16> kStateSweep = {{
    {0.0, 1.00, 1.00, 1.00},
    {3.0, 0.989, 1.00, 0.996},
    {6.0, 0.957, 0.995, 0.976},
    {9.0, 0.905, 0.977, 0.936},
    {12.0, 0.835, 0.955, 0.883},
    {15.0, 0.75, 0.906, 0.799},
    {18.0, 0.655, 0.927, 0.830},
    {21.0, 0.552, 0.949, 0.860},
    {24.0, 0.448, 0.963, 0.883},
    {27.0, 0.345, 0.973, 0.900},
    {30.0, 0.25, 0.982, 0.921},
    {33.0, 0.165, 0.989, 0.943},
    {36.0, 0.095, 0.994, 0.963},
    {39.0, 0.043, 0.997, 0.979},
    {42.0, 0.011, 0.999, 0.992},
    {45.0, 0.00, 1.00, 1.00},
}};

const char *const kPlusStateSettingSource =
    "experiment main text, measured transition probabilities for |+> under "
    "U(pi/4) and the headline fidelities F_CM = 0.998, F_TPM = 0.706";

const SingleSetting kPlusStateSetting = {
    // CM counts for (0,0'), (0,1'), (1,0'), (1,1'); marginals 0.996 / 0.004.
    {0.464, 0.001, 0.532, 0.003},
    // TPM counts, marginals 0.498 / 0.502.
    {0.244, 0.275, 0.254, 0.227},
    0.998,
    0.706,
};

}  // namespace backaction::refdata
