"""grady: exact classification and decomposition of group-graded rings.

The package represents finite group-graded rings concretely (structure
constants over products of Z/m, or Leavitt path algebras of finite graphs),
classifies their grading, computes the component identities and their
boolean semigroup, and splits epsilon-strongly graded rings into strongly
graded summands plus a trivially graded remainder.
"""

__version__ = "0.1.0"
