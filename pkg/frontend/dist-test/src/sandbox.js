/** Compounding what-if explorer.
 *
 * The sandbox never does score arithmetic: every displayed total comes
 * straight from a gateway response. Applying a modification stores the
 * server-returned post-modification profile, and the next what-if is
 * issued against that profile so projections compound server-side. Undo
 * replays the remaining chain (or re-fetches the baseline) to get a
 * fresh server number.
 */
export class WhatIfSandbox {
    seqn;
    client;
    applied = [];
    profile = null;
    lastResponse = null;
    baselineTotal;
    constructor(client, seqn, baselineTotal) {
        this.client = client;
        this.seqn = seqn;
        this.baselineTotal = baselineTotal;
    }
    get appliedModifications() {
        return this.applied;
    }
    get lastWhatIf() {
        return this.lastResponse;
    }
    /** The score currently shown; always a value the server produced. */
    get displayedTotal() {
        return this.lastResponse ? this.lastResponse.after_total : this.baselineTotal;
    }
    requestFor(mod) {
        const base = {
            food_code: mod.food_code,
            portion: mod.portion,
            mode: mod.mode,
        };
        if (mod.swap_base !== undefined) {
            base.swap_base = mod.swap_base;
        }
        if (this.profile) {
            base.profile = this.profile;
        }
        else {
            base.seqn = this.seqn;
        }
        return base;
    }
    /** Project a modification on the current sandbox state without applying. */
    async preview(mod) {
        return this.client.whatIf(this.requestFor(mod));
    }
    /** Apply a modification: the next what-if compounds on its result. */
    async apply(mod) {
        const resp = await this.client.whatIf(this.requestFor(mod));
        this.applied.push(mod);
        this.profile = resp.after_profile;
        this.lastResponse = resp;
        return resp;
    }
    /** Remove the most recent modification and re-derive the displayed
     *  total from fresh server responses (replayed chain or baseline). */
    async undo() {
        if (this.applied.length === 0) {
            return this.displayedTotal;
        }
        const remaining = this.applied.slice(0, -1);
        this.applied = [];
        this.profile = null;
        this.lastResponse = null;
        if (remaining.length === 0) {
            const hei = await this.client.getHei(this.seqn);
            this.baselineTotal = hei.total;
            return this.baselineTotal;
        }
        for (const mod of remaining) {
            const resp = await this.client.whatIf(this.requestFor(mod));
            this.applied.push(mod);
            this.profile = resp.after_profile;
            this.lastResponse = resp;
        }
        return this.displayedTotal;
    }
    /** Drop everything and re-anchor on a fresh baseline score. */
    async reset() {
        this.applied = [];
        this.profile = null;
        this.lastResponse = null;
        const hei = await this.client.getHei(this.seqn);
        this.baselineTotal = hei.total;
        return this.baselineTotal;
    }
}
