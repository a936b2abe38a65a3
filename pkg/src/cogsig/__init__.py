"""cogsig: user identification from cognitive-behavioral interaction patterns.

The pipeline: capture or simulate a mouse/keyboard event stream evoked by
a graphical stimuli task, segment it into fixed ticks of behavioral
attributes, discretize, learn a threshold-connected Bayesian network and
classify user identity from the posterior.
"""

from .bayes import (BayesNet, EvaluationReport, NetworkStructure, classify,
                    conditional_mutual_information, estimate_cpts, evaluate,
                    learn_structure, mutual_information, posterior,
                    run_evaluation, split_train_test, train_classifier)
from .config import (PRESET_EQUAL_FREQUENCY, PRESET_EQUAL_WIDTH, PipelineConfig)
from .discretize import (CodeBook, DiscreteTable, DiscretizationScheme,
                         discretize_table, encode_table, fit_equal_frequency,
                         fit_equal_width)
from .events import (EventKind, InputEvent, LogParseError, SessionLog,
                     parse_event_log, serialize_event_log, validate_session)
from .features import (CaseRecord, CaseTable, MotionClass, Rect, StimuliLayout,
                       StimuliObject, TimedPoint, build_case_table,
                       classify_motion, extract_case, segment_cases)
from .model_io import model_from_json, model_to_json, report_to_json
from .simulate import (TaskScript, TaskStep, UserProfile, default_layout,
                       default_profiles, default_script, generate_session)

__version__ = "0.1.0"
