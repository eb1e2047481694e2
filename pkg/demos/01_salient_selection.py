"""Salient sentence selection on the bundled debate sample.

Loads the two-topic climate debate corpus, extracts topic signatures for one
topic against the other, scores every sentence with the eight features, and
selects the top 20% per comment. Shows how the sentence-position feature
picks the leading sentences while the combined score can differ.
"""

from pathlib import Path

from debatesum.corpus import load_corpus
from debatesum.pipeline import topic_signatures_for
from debatesum.saliency import Feature, default_lexicons, load_embeddings, score_comment, select_salient

SAMPLE = Path(__file__).resolve().parents[1] / "data" / "sample"


def main():
    corpus = load_corpus(SAMPLE / "corpus.json")
    lexicons = default_lexicons(embeddings=load_embeddings(SAMPLE / "embeddings.txt"))

    topic = corpus[0]
    print(f"topic {topic.id}: {topic.title!r}")

    signatures = topic_signatures_for(corpus, topic, threshold=10.83)
    print(f"\ntopic signatures vs the other topics (LLR >= 10.83):")
    for s in signatures[:8]:
        print(f"  {s.term:<14} llr={s.llr:7.2f}")
    if not signatures:
        print("  (none cleared the threshold)")

    comment = topic.comments[2]  # the five-sentence agree comment
    print(f"\ncomment {comment.id} ({comment.side.value}, {len(comment.sentences)} sentences)")
    scores = score_comment(comment, topic, lexicons, signatures)
    header = f"{'sentence':<10} {'SP':>5} {'SL':>5} {'TT':>5} {'CJ':>3} {'TTS':>6} {'CB':>6}"
    print(header)
    for s in comment.sentences:
        fv = scores[s.id]
        print(
            f"{s.id:<10} {fv.raw[Feature.SP]:>5.2f} {fv.raw[Feature.SL]:>5.0f} "
            f"{fv.raw[Feature.TT]:>5.2f} {fv.raw[Feature.CJ]:>3.0f} "
            f"{fv.raw[Feature.COS_TTS]:>6.3f} {fv.cb:>6.3f}"
        )

    for feature in (Feature.SP, Feature.CB, Feature.COS_TTS):
        selected = select_salient(comment, scores, feature=feature)
        texts = {s.id: s.text for s in comment.sentences}
        print(f"\ntop 20% by {feature.value}:")
        for sid in selected:
            print(f"  {sid}: {texts[sid]}")


if __name__ == "__main__":
    main()
