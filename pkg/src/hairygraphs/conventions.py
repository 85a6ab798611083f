"""Sign conventions and test hooks shared across operations.

All residual sign freedom left open by the defining relations is pinned
here and certified by the identity test suites (d^2 = 0, Leibniz, Jacobi,
Maurer-Cartan, action axioms).  Nothing else in the package hard-codes a
convention choice.

Conventions in force:

* newly created edges and vertices are ordered last;
* removals move the entity past everything after it (to the end);
* a contracted edge is brought to the front, its endpoints to the first two
  vertex positions, and the contraction itself carries sign +1;
* hair attachment converts the hair leg into a normal edge ordered last,
  consuming first the hair decoration and then the matched dual slot;
* multi-argument operations suspend each module argument with a formal odd
  marker (shift convention), so Taylor coefficients are symmetric in the
  shifted grading and series over copies of degree-1 elements are stable.

SABOTAGE is a test hook: set to "flip-contract-sign" or "flip-split-sign"
to force a property-suite failure and exercise counterexample reporting.
"""

SABOTAGE = None
