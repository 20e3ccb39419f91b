"""Bundled English stopword list.

Fixed and versioned in-repo so keyword extraction is reproducible. Used only
for candidate filtering in the co-occurrence graph; tokenization keeps
stopwords so they still occupy window positions.
"""

STOPWORDS = frozenset(
    """
    a about above after again against all am an and any are as at
    be because been before being below between both but by
    can cannot could
    did do does doing down during
    each either
    few for from further
    had has have having he her here hers herself him himself his how
    i if in into is it its itself
    just
    me more most much must my myself
    neither no nor not now
    of off on once only onto or other our ours ourselves out over own
    same she should since so some such
    than that the their theirs them themselves then there these they
    this those through to too
    under until up upon
    very
    was we were what when where whether which while who whom why will
    with within without would
    you your yours yourself yourselves
    """.split()
)
