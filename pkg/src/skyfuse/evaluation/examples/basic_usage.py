"""
Basic usage examples for detection evaluation.

Run with: python -m skyfuse.evaluation.examples.basic_usage
"""

from rich.console import Console

from skyfuse.core import BBox, Category, DetectionSet
from skyfuse.evaluation import MatchConfig, evaluate, f_measure, method_ladder_table

GT = DetectionSet.from_boxes(
    [
        BBox(0, 0, 10, 10, Category.GROUND_TRUTH, 1.0, 0),
        BBox(6, 0, 10, 10, Category.GROUND_TRUTH, 1.0, 0),
    ]
)
DT = DetectionSet.from_boxes(
    [
        BBox(2, 0, 10, 10, Category.MOVING_VEHICLE, 1.0, 0),
        BBox(-3, 0, 10, 10, Category.MOVING_VEHICLE, 1.0, 0),
    ]
)


def example_rules() -> None:
    """Example 1: The same boxes under different match rules."""
    print("\n" + "=" * 70)
    print("Example 1: Match Rules")
    print("=" * 70)

    print()
    for text in ("iou:0.3", "iou:0.5", "centroid"):
        scores = evaluate(GT, DT, MatchConfig.parse(text))
        print(f"  {scores.criterion:<20} TP {scores.tp}, F {scores.f_measure:.1f}")


def example_greedy_vs_optimal() -> None:
    """Example 2: Greedy matching can miss a pairing that optimal finds."""
    print("\n" + "=" * 70)
    print("Example 2: Greedy vs Optimal Assignment")
    print("=" * 70)

    greedy = evaluate(GT, DT, MatchConfig())
    optimal = evaluate(GT, DT, MatchConfig(optimal=True))
    print(f"\nGreedy TP: {greedy.tp}, optimal TP: {optimal.tp}")


def example_ladder() -> None:
    """Example 3: A method table."""
    print("\n" + "=" * 70)
    print("Example 3: Method Ladder Table")
    print("=" * 70)

    print(f"\nF for P=26.91, R=72.56: {f_measure(26.91, 72.56):.2f}")
    rows = [
        ("Greedy", evaluate(GT, DT, MatchConfig())),
        ("Optimal", evaluate(GT, DT, MatchConfig(optimal=True))),
    ]
    Console().print(method_ladder_table(rows, title="Assignment"))


if __name__ == "__main__":
    print("\n" + "=" * 70)
    print("skyfuse evaluation - Usage Examples")
    print("=" * 70)

    example_rules()
    example_greedy_vs_optimal()
    example_ladder()

    print("\n" + "=" * 70)
    print("Examples complete!")
    print("=" * 70 + "\n")
