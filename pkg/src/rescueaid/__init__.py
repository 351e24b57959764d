"""rescueaid: desk-scale rescue decision support.

The package couples three cooperating parts:

* a data pipeline that turns raw rescue case tables into training-ready
  feature matrices (``rescueaid.case_data``),
* a small feedforward classifier that maps live vitals and coded text to a
  probability distribution over ten complication groups
  (``rescueaid.recognition``),
* a treatment-graph layer plus recommendation engine that positions a
  session in an EPC-style graph and keeps re-ranking paths as new vitals
  stream in (``rescueaid.treatment``, ``rescueaid.engine``), exposed as a
  long-running service (``rescueaid.service``).

See README.md for the CLI surface and the acceptance suite.
"""

from rescueaid.groups import ComplicationGroup, VitalKind

__version__ = "0.1.0"

__all__ = ["ComplicationGroup", "VitalKind", "__version__"]
