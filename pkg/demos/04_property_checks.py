"""Running the verification suite, then forcing a failure on purpose.

Every structural claim the closure construction relies on has a
runnable check. The suite prints one TSV line per check with a witness
column; a healthy corpus is all `pass`. Feeding a wrong shift bound
shows what a failure looks like: the report carries a concrete point,
weight vector, and violated inequality anyone can re-evaluate.
"""

from aggclosure import COVERING, Instance, PACKING, SampleScheme, run_suite, suite_lines
from aggclosure.verify import check_gamma


def main():
    corpus = [
        Instance(PACKING, ((2, 3),), (4,), instance_id="pack23"),
        Instance(COVERING, ((2, 3), (3, 2)), (4, 4), instance_id="coverfix"),
        Instance(PACKING, ((2, 3), (1, 4)), (4, 4), instance_id="pack2rows"),
    ]
    scheme = SampleScheme(grid_denominator=2)

    print("check\tinstance\tstatus\twitness\ttiming_ms")
    for line in suite_lines(run_suite(corpus, scheme)):
        print(line)

    print("\nnow the same shift-bound check with a deliberately wrong bound of 0:")
    broken = check_gamma(corpus[1], scheme, gamma_override=0)
    print(f"  status   {broken.status}")
    print(f"  witness  {broken.witness_text()}")
    print("\nthe witness point is a shifted vertex that a sampled hull rejects;")
    print("plugging it into the printed inequality shows the violation directly")


if __name__ == "__main__":
    main()
