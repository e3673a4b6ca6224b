/**
 * Typed client for the workbench HTTP API.
 *
 * Every call goes through one request helper that decodes the shared
 * error envelope ({code, message, detail}) into ApiError, so callers
 * can branch on `code` without caring about transport details.
 */

export interface SenseDto {
  key: string;
  ordinal: number;
  ode_key: string;
  is_core: boolean;
  relation_name: string;
  quirk_syntax: string[];
  quirk_paragraphs: string[];
  complement_properties: string;
  attachment_properties: string;
  similar_prepositions: string[];
  complement_categories: string[];
  attachment_categories: string[];
  origin: string;
}

export interface SensesDto {
  preposition: string;
  notes: string | null;
  summary: string | null;
  senses: SenseDto[];
}

export interface GroupMemberDto {
  instance_id: string;
  sentence_id: string;
  prep_start: number;
  subcorpus: string;
  text: string | null;
  prep_span: [number, number] | null;
  fe_span: [number, number] | null;
  tags: string[] | null;
  tagger: string | null;
  note: string | null;
}

export interface GroupDto {
  frame: string;
  frame_element: string;
  lexical_unit: string;
  members: GroupMemberDto[];
}

export interface GroupedInstancesDto {
  preposition: string;
  version: number;
  groups: GroupDto[];
  placeholders: {
    frame: string;
    lexical_unit: string;
    subcorpus: string;
    instance_id: string;
  }[];
}

export interface ProgressDto {
  preposition: string;
  tagged: number;
  total: number;
  per_sense: Record<string, number>;
  unknown_ids: string[];
}

export interface TagRowDto {
  instance_id: string;
  sense_keys: string[];
  tagger: string;
  note: string | null;
}

export interface TagListDto {
  preposition: string;
  version: number;
  tags: TagRowDto[];
}

export interface TagSubmission {
  version: number;
  ids: string[];
  sense_keys: string[];
  tagger: string;
  note?: string | null;
}

export interface TagAckDto {
  version: number;
  new: number;
  overwritten: number;
}

export interface SubsenseResultDto {
  key: string;
  sense: SenseDto;
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
    readonly detail: unknown,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

/** Injectable so tests can count or fail requests. */
export type FetchLike = (
  url: string,
  init?: RequestInit,
) => Promise<Response>;

export class ApiClient {
  constructor(
    readonly baseUrl: string,
    private readonly fetchFn: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchFn(this.baseUrl + path, init);
    const body: unknown = await response.json();
    if (!response.ok) {
      const env = body as { code?: string; message?: string; detail?: unknown };
      throw new ApiError(
        response.status,
        env.code ?? "unknown",
        env.message ?? `request failed with ${response.status}`,
        env.detail ?? null,
      );
    }
    return body as T;
  }

  private post<T>(path: string, payload: unknown): Promise<T> {
    return this.request<T>(path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(payload),
    });
  }

  listPrepositions(): Promise<{ prepositions: string[] }> {
    return this.request("/api/prepositions");
  }

  senses(prep: string): Promise<SensesDto> {
    return this.request(`/api/prepositions/${encodeURIComponent(prep)}/senses`);
  }

  groupedInstances(prep: string): Promise<GroupedInstancesDto> {
    return this.request(
      `/api/prepositions/${encodeURIComponent(prep)}/instances?grouped=1`,
    );
  }

  submitTags(prep: string, submission: TagSubmission): Promise<TagAckDto> {
    return this.post(
      `/api/prepositions/${encodeURIComponent(prep)}/tags`,
      submission,
    );
  }

  tags(prep: string): Promise<TagListDto> {
    return this.request(`/api/prepositions/${encodeURIComponent(prep)}/tags`);
  }

  progress(prep: string): Promise<ProgressDto> {
    return this.request(
      `/api/prepositions/${encodeURIComponent(prep)}/progress`,
    );
  }

  createSubsense(
    prep: string,
    parent: string,
    fields: Record<string, unknown> = {},
  ): Promise<SubsenseResultDto> {
    return this.post(
      `/api/prepositions/${encodeURIComponent(prep)}/senses/subsense`,
      { parent, fields },
    );
  }
}
