// Wire types for /api/v1 (field names match the server's canonical JSON).

export type PostKind = "need" | "availability" | "other";
export type PostStatus = "active" | "matched" | "completed";
export type MatchStatus = "matched" | "completed";
export type ResourceClass = "food" | "health" | "shelter" | "logistics";

export interface ApiLocation {
  surface: string;
  canonical: string;
  lat: number;
  lon: number;
  granularity: "country" | "region" | "city" | "poi";
}

export interface ApiContact {
  kind: "phone" | "email";
  value: string;
}

export interface ApiExtraction {
  resources: string[];
  resource_classes: ResourceClass[];
  quantities: Record<string, number>;
  locations: ApiLocation[];
  sources: string[];
  contacts: ApiContact[];
}

export interface ApiPost {
  id: string;
  text_raw: string;
  text_clean: string;
  created_at: string;
  source_channel: "imported" | "manual";
  label: PostKind;
  label_origin: "gold" | "predicted" | "human-edited";
  status: PostStatus;
  extraction: ApiExtraction | null;
}

export interface ApiMatch {
  id: string;
  need_id: string;
  avail_id: string;
  score: number;
  status: MatchStatus;
  created_at: string;
  completed_at: string | null;
}

export interface ApiPage<T> {
  items: T[];
  total: number;
  limit: number;
  offset: number;
  revision: number;
}

export interface ApiSuggestion {
  need_id: string;
  avail_id: string;
  score: number;
  common: string[];
}

export interface ApiParseResult {
  kind: PostKind;
  scores: Record<PostKind, number>;
  text_clean: string;
  extraction: ApiExtraction;
}
