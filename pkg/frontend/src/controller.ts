/**
 * Tagging session state. One controller per open preposition.
 *
 * Mutation discipline: local state changes only after the service
 * acknowledges a write, and the refreshed groups, version and progress
 * all come back from the service rather than being patched locally.
 * A stale-version answer keeps the operator's selection as a pending
 * submission and asks them to re-apply against the refreshed state.
 */

import { ApiClient, ApiError, type ProgressDto } from "./api.js";
import {
  buildPalette,
  canAddSubsense,
  groupView,
  keyAction,
  type GroupView,
  type PaletteEntry,
} from "./model.js";

export type Status =
  | "idle"
  | "loading"
  | "ready"
  | "submitting"
  | "stale"
  | "error";

export type SubmitOutcome = "blocked" | "ok" | "stale" | "error";

export interface PendingSubmission {
  groupIndex: number;
  senseKeys: string[];
  note: string | null;
}

export class WorkbenchController {
  status: Status = "idle";
  prep = "";
  palette: PaletteEntry[] = [];
  groups: GroupView[] = [];
  version = -1;
  progress: ProgressDto | null = null;
  focusedGroup = 0;
  selection = new Set<string>();
  pending: PendingSubmission | null = null;
  lastError: string | null = null;

  constructor(
    private readonly client: ApiClient,
    readonly tagger: string,
  ) {}

  async load(prep: string): Promise<void> {
    this.prep = prep;
    this.status = "loading";
    try {
      const senses = await this.client.senses(prep);
      this.palette = buildPalette(senses.senses);
      await this.refresh();
      this.status = "ready";
      this.lastError = null;
    } catch (err) {
      // selection and pending survive so a retry loses nothing
      this.status = "error";
      this.lastError = errorText(err);
    }
  }

  retry(): Promise<void> {
    return this.load(this.prep);
  }

  get emptyState(): boolean {
    return this.status === "ready" && this.groups.length === 0;
  }

  toggleSense(key: string): void {
    if (this.selection.has(key)) {
      this.selection.delete(key);
    } else {
      this.selection.add(key);
    }
  }

  clearSelection(): void {
    this.selection.clear();
  }

  /** Route one keystroke; returns false for keys the palette ignores. */
  handleKey(key: string): boolean {
    const action = keyAction(key);
    if (action === null) return false;
    if (action.type === "select") {
      const entry = this.palette[action.index];
      if (entry === undefined) return false;
      this.toggleSense(entry.key);
      return true;
    }
    if (action.type === "commit") {
      void this.submitGroup(this.focusedGroup);
      return true;
    }
    this.clearSelection();
    return true;
  }

  async submitGroup(
    groupIndex: number,
    note: string | null = null,
  ): Promise<SubmitOutcome> {
    const senseKeys = [...this.selection];
    if (senseKeys.length === 0) return "blocked";
    const group = this.groups[groupIndex];
    if (group === undefined) return "blocked";
    const ids = group.members.map((m) => m.instanceId);
    this.status = "submitting";
    try {
      await this.client.submitTags(this.prep, {
        version: this.version,
        ids,
        sense_keys: senseKeys,
        tagger: this.tagger,
        note,
      });
      await this.refresh();
      this.selection.clear();
      this.pending = null;
      this.status = "ready";
      this.lastError = null;
      return "ok";
    } catch (err) {
      this.pending = { groupIndex, senseKeys, note };
      if (err instanceof ApiError && err.code === "stale_version") {
        // someone else wrote first: show their state, ask to re-apply
        await this.refresh();
        this.status = "stale";
        return "stale";
      }
      this.status = "error";
      this.lastError = errorText(err);
      return "error";
    }
  }

  /** Re-apply the pending submission against the refreshed version. */
  async reapply(): Promise<SubmitOutcome> {
    const pending = this.pending;
    if (pending === null) return "blocked";
    this.selection = new Set(pending.senseKeys);
    return this.submitGroup(pending.groupIndex, pending.note);
  }

  discardPending(): void {
    this.pending = null;
    if (this.status === "stale") this.status = "ready";
  }

  canAddSubsenseTo(key: string): boolean {
    const entry = this.palette.find((e) => e.key === key || e.odeKey === key);
    return entry !== undefined && canAddSubsense(entry);
  }

  async createSubsense(
    parentKey: string,
    fields: Record<string, unknown> = {},
  ): Promise<string> {
    if (!this.canAddSubsenseTo(parentKey)) {
      throw new Error(`${parentKey} is not a core sense`);
    }
    try {
      const result = await this.client.createSubsense(
        this.prep,
        parentKey,
        fields,
      );
      const senses = await this.client.senses(this.prep);
      this.palette = buildPalette(senses.senses);
      return result.key;
    } catch (err) {
      // server-side validation text shown verbatim
      this.lastError = errorText(err);
      throw err;
    }
  }

  private async refresh(): Promise<void> {
    const grouped = await this.client.groupedInstances(this.prep);
    const progress = await this.client.progress(this.prep);
    this.groups = grouped.groups.map(groupView);
    this.version = grouped.version;
    this.progress = progress;
    if (this.focusedGroup >= this.groups.length) {
      this.focusedGroup = Math.max(0, this.groups.length - 1);
    }
  }
}

function errorText(err: unknown): string {
  if (err instanceof ApiError) return err.message;
  if (err instanceof Error) return err.message;
  return String(err);
}
