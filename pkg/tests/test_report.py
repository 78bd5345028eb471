from biascade.calibration import LabeledExample, eval_report
from biascade.ingest import corpus_stats
from biascade.report import (
    render_cohort_summary,
    render_eval_report,
    render_interaction_breakdown,
    render_no_roots_summary,
    render_prf_table,
)

# Published values used purely as rendering fixtures (format contract).
ROBERTA_ROWS = [
    ("RoBERTa", "Non-Claim", 0.91, 1.00, 0.95),
    ("RoBERTa", "Claim", 0.80, 0.12, 0.22),
]
BERT_ROWS = [
    ("BERT", "Non-Claim", 0.90, 0.99, 0.94),
    ("BERT", "Claim", 0.33, 0.06, 0.11),
]


class TestPrfTable:
    def test_renders_published_rows_exactly(self):
        table = render_prf_table(ROBERTA_ROWS + BERT_ROWS)
        for cell in ("0.91", "1.00", "0.95", "0.80", "0.12", "0.22",
                     "0.90", "0.99", "0.94", "0.33", "0.06", "0.11"):
            assert cell in table
        lines = table.splitlines()
        assert lines[0].split() == ["Model", "Class", "Precision", "Recall", "F-1", "Score"]
        roberta_claim = next(l for l in lines if "Claim" in l and "RoBERTa" in l and "Non" not in l)
        assert roberta_claim.split() == ["RoBERTa", "Claim", "0.80", "0.12", "0.22"]

    def test_two_decimal_formatting(self):
        table = render_prf_table([("m", "c", 1 / 3, 2 / 3, 0.5)])
        assert "0.33" in table and "0.67" in table and "0.50" in table

    def test_eval_report_rendering(self):
        examples = [LabeledExample("a", 0.9, 1), LabeledExample("b", 0.1, 0)]
        text = render_eval_report(eval_report(examples, 0.5), model="scorer")
        assert "tau=0.5" in text
        assert "Non-Claim" in text and "Claim" in text
        assert "1.00" in text


class TestInteractionBreakdown:
    def test_published_percentages_render_exactly(self, fig2_corpus):
        stats = corpus_stats(fig2_corpus)
        text = render_interaction_breakdown(stats)
        assert "retweets 57.5%" in text
        assert "replies 26%" in text
        assert "mentions/quotes 3%" in text
        assert "original tweets 13.5%" in text

    def test_empty_corpus_message(self):
        assert "empty corpus" in render_interaction_breakdown(corpus_stats([]))


class TestCohortSummary:
    def test_published_values_render_exactly(self):
        text = render_cohort_summary(
            mean_size_tweets=17.77,
            share_multi=0.1471,
            velocity_pairs={100: (145.31, 822.43)},
            top_reach=(500, 40),
            top_q=0.99,
        )
        assert "Average cascade size: 17.77 tweets" in text
        assert "Users authoring two or more cascades: 14.71%" in text
        assert "Median time to 100 retweets: biased 145.31 min vs unbiased 822.43 min" in text
        assert "Top 1% of biased cascades reach at least 500 users" in text
        assert "top 1% of unbiased cascades reach at least 40 users" in text

    def test_missing_velocity_entries_skipped(self):
        text = render_cohort_summary(2.0, 0.0, {5: (None, 3.0), 1: (1.0, 2.0)}, (3, 2))
        assert "Median time to 1 retweets" in text
        assert "Median time to 5" not in text

    def test_all_missing_gives_placeholder(self):
        text = render_cohort_summary(None, None, {}, (None, None))
        assert "no cohort cascades" in text

    def test_no_roots_summary(self):
        assert "no roots" in render_no_roots_summary(12)
