from stapde.dataset.embedding import embed, embed_components, extract, field_embedding, field_mask
from stapde.dataset.manifest import SPLITS, SplitManifest
from stapde.dataset.windows import ROLLOUT, TRAIN, RolloutSequence, Sample, batches, stack_frames, stack_samples, window
from stapde.fdtd.container import read_trajectory, write_trajectory
