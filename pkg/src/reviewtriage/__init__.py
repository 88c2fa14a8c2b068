"""reviewtriage: semi-automated management of explanation needs in
app-store reviews.

The pipeline detects explanation needs with a word/phrase lexicon,
classifies them into a taxonomy, ranks responsible teams from a
threshold-derived hierarchy, resolves answer sources through a three-tier
hierarchy, and routes everything through a human-in-the-loop triage
workflow with full evaluation metrics.
"""

__version__ = "0.1.0"

from .corpus import (  # noqa: F401
    CorpusStats,
    ImportFormat,
    ImportReport,
    NeedUnit,
    Review,
    ResponseRecord,
    StoreKind,
    corpus_stats,
    dedupe,
    import_reviews,
    load_corpus,
    normalize_review,
    save_corpus,
)
from .detect import (  # noqa: F401
    LabeledBy,
    Lexicon,
    LexiconEntry,
    MatchHit,
    MatchMode,
    NeedKind,
    NeedLabel,
    detect_corpus,
    label_unit,
    load_lexicon,
    match_review,
)
from .errors import DataError, IllegalTransition, TriageError, VersionConflict  # noqa: F401
from .metrics import (  # noqa: F401
    AgreementBand,
    AggregationMode,
    ConfusionMatrix,
    FBetaVariant,
    RatingsTable,
    accuracy,
    aggregate_prf,
    cohen_kappa,
    f_beta,
    fleiss_kappa,
    landis_koch,
    per_class_prf,
    validity,
)
from .assignment import (  # noqa: F401
    AssignmentEvidence,
    AssignmentTable,
    Team,
    assign,
    derive_table,
    hierarchy_hit_rate,
    load_evidence,
    load_table,
)
from .sources import (  # noqa: F401
    ArticleIndex,
    PastResponse,
    ResolvePolicy,
    SourceCandidate,
    SourceTier,
    SupportArticle,
    find_articles,
    find_past_responses,
    index_articles,
    resolve,
    similarity,
)
from .taxonomy import (  # noqa: F401
    CategoryFilter,
    CategorySuggestion,
    Granularity,
    TaxonomyConfig,
    classify,
    compare_granularity,
    evaluate_filter,
    load_rules,
    load_taxonomy,
    rollup,
)
from .workflow import (  # noqa: F401
    Action,
    ActionType,
    Actor,
    CaseState,
    CaseStore,
    Resolution,
    TriageCase,
    WorkflowPolicy,
    addressability_report,
    advance,
    export_evidence,
)
