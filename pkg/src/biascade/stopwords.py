"""Pinned English stopword list used by text preprocessing.

The list is derived from the classic Snowball English stopword list with two
curated edits, so identical input text always yields identical tokens:

* quantifier words ("all", "only", "every", "any", "each", "both", "few",
  "more", "most", "some") are NOT treated as stopwords because the lexical
  scorers downstream use them as generalization cues;
* common apostrophe contractions ("don't", "can't", ...) are included as
  whole tokens, since the tokenizer keeps internal apostrophes.

Bump STOPWORDS_VERSION whenever the list changes; corpora processed under
different versions are not token-compatible.
"""

STOPWORDS_VERSION = "2024.1"

STOPWORDS = frozenset(
    """
    i me my myself we our ours ourselves you your yours yourself yourselves
    he him his himself she her hers herself it its itself they them their
    theirs themselves what which who whom this that these those am is are
    was were be been being have has had having do does did doing a an the
    and but if or because as until while of at by for with about against
    between into through during before after above below to from up down in
    out on off over under again further then once here there when where why
    how other such no nor not own same so than too very s t can will just
    should now
    don't doesn't didn't isn't aren't wasn't weren't hasn't haven't hadn't
    won't wouldn't can't cannot couldn't shouldn't mustn't needn't ain't
    i'm i've i'll i'd you're you've you'll you'd he's she's it's we're we've
    we'll they're they've they'll that's there's here's what's who's let's
    """.split()
)
