/**
 * Payload shapes as the API serializes them.
 *
 * These mirror the JSON the backend emits field for field; the client
 * renders them verbatim and never derives its own counts or rankings.
 */

export interface Municipality {
  id: string;
  name: string;
  slug: string;
  published_minutes: number;
}

export interface ParticipantView {
  id: string;
  full_name: string;
  party: string | null;
  role: string | null;
  unresolved: boolean;
}

export interface RecentMinute {
  id: string;
  meeting_date: string | null;
  meeting_type: string | null;
  subjects: number;
}

export interface TopicRef {
  id: string;
  label: string;
}

export interface TopicGroup {
  topic: TopicRef;
  minute_ids: string[];
}

export interface OverviewPayload {
  municipality: { id: string; name: string; slug: string };
  recent_minutes: RecentMinute[];
  executive_members: ParticipantView[];
  topics: TopicGroup[];
}

/** [year-month, minute ids], already in display order. */
export type TimelineGroup = [string, string[]];

export interface TimelinePayload {
  municipality_id: string;
  groups: TimelineGroup[];
}

export interface SearchHit {
  unit_id: string;
  score: number;
  snippet: string;
  kind: "minute" | "subject";
  minute_id: string;
  subject_id: string | null;
  municipality_id: string;
  title: string;
  meeting_date: string;
}

/** dimension -> facet value -> count, counted with that dimension's own selections excluded. */
export type FacetCounts = Record<string, Record<string, number>>;

export interface SearchPayload {
  hits: SearchHit[];
  total: number;
  facet_counts: FacetCounts;
  page: number;
  page_size: number;
}

export type VotePositionName = "favor" | "against" | "abstention";

export interface VotePositionView {
  participant_id: string;
  position: VotePositionName;
}

export interface Tally {
  favor: number;
  against: number;
  abstention: number;
  outcome: string;
  positions: VotePositionView[] | null;
}

export interface SubjectView {
  id: string;
  order: number;
  title: string;
  summary: string;
  topics: TopicRef[];
  tally: Tally | null;
}

export interface MinuteMetadataView {
  meeting_date: string;
  location: string;
  meeting_type: string;
  participants: ParticipantView[];
}

export interface MinutePayload {
  minute: {
    id: string;
    municipality_id: string;
    source_filename: string;
    status: string;
    uploaded_at: string;
    published_at: string | null;
    metadata: MinuteMetadataView | null;
  };
  subjects: SubjectView[];
  voting_summary: { favor: number; against: number; abstention: number };
  raw_text_path: string;
}

export interface SubscribePayload {
  email: string;
  municipality_ids: string[];
  created: boolean;
}

// Back-office shapes.

export interface AdminMinute {
  id: string;
  municipality_id: string;
  status: string;
  source_filename: string;
  uploaded_at: string;
}

export interface RawParticipant {
  name: string;
  party: string | null;
  role: string | null;
}

export interface RawVote {
  participant_name: string;
  position: string;
}

export interface RawMetadata {
  meeting_date: string;
  location: string;
  meeting_type: string;
  participants: RawParticipant[];
}

export interface RawSubject {
  title: string;
  summary: string;
  topic_labels: string[];
  votes: RawVote[] | null;
}

export interface ExtractionDraft {
  metadata_raw: RawMetadata;
  subjects_raw: RawSubject[];
  extractor_id: string;
  model_id: string | null;
}

export interface ResolutionPreview {
  ok: boolean;
  errors: string[];
  unresolved_names: string[];
  new_topic_labels: string[];
}

export interface ExtractionPayload {
  minute_id: string;
  status: string;
  extraction: ExtractionDraft | null;
  error: string | null;
  preview: ResolutionPreview | null;
}

export interface PublishPayload {
  minute_id: string;
  status: string;
  index_units: number;
  warnings: string[];
}
