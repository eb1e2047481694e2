"""From clusters to the final Chart Summary artifacts.

Runs the whole pipeline on the bundled sample with the X-means branch and MI
labels, then shows the alignment decisions and writes the grouped-bar chart
(JSON and self-contained HTML) for each topic into demos/output/.
"""

import json
from pathlib import Path

from debatesum.pipeline import load_config, run_pipeline

HERE = Path(__file__).resolve().parent
SAMPLE = HERE.parent / "data" / "sample"


def main():
    out_dir = HERE / "output"
    config = load_config(SAMPLE / "config.json", overrides={"output_dir": str(out_dir)})
    manifest = run_pipeline(config)
    print(f"pipeline wrote {len(manifest['artifacts'])} artifacts to {out_dir}\n")

    alignment = json.loads((out_dir / "alignment.json").read_text())
    for topic in alignment["topics"]:
        print(f"topic {topic['topic_id']}:")
        for pair in topic["pairs"]:
            print(
                f"  aligned {pair['label']!r}: {pair['agree_cluster_id']} <-> "
                f"{pair['disagree_cluster_id']} (cosine {pair['similarity']:.2f})"
            )
        for dropped in topic["dropped"]:
            print(f"  dropped [{dropped['side']}] {dropped['label']!r} (no partner)")

    print()
    for chart_path in sorted(out_dir.glob("chart_*.json")):
        chart = json.loads(chart_path.read_text())
        print(f"{chart_path.name}: {len(chart['bars'])} bars")
        for bar in chart["bars"]:
            marks = "#" * (bar["agree_count"] + bar["disagree_count"])
            print(
                f"  {bar['label']:<18} agree={bar['agree_count']} "
                f"disagree={bar['disagree_count']} {marks}"
            )
    html_files = sorted(p.name for p in out_dir.glob("chart_*.html"))
    print(f"\nopen in a browser: {', '.join(str(out_dir / f) for f in html_files)}")


if __name__ == "__main__":
    main()
